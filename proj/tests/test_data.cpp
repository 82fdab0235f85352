#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "discgan/data/csv.hpp"
#include "discgan/data/sampler.hpp"
#include "discgan/data/standin.hpp"
#include "discgan/data/transforms.hpp"
#include "discgan/errors.hpp"
#include "support.hpp"

using namespace discgan;
using namespace discgan::data;

namespace {

TableSchema age_gender_schema() {
  return TableSchema({{"age", ColumnKind::continuous, ColumnRole::feature},
                      {"gender", ColumnKind::discrete, ColumnRole::feature}});
}

RawTable parse(const std::string& text, const TableSchema& schema) {
  std::istringstream in(text);
  return read_csv(in, schema);
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

TEST_CASE("schema json round trip and validation") {
  const auto schema = age_gender_schema();
  CHECK(TableSchema::from_json(schema.to_json()) == schema);
  CHECK_THROWS_AS(TableSchema({{"a", ColumnKind::continuous, ColumnRole::feature},
                               {"a", ColumnKind::discrete, ColumnRole::feature}}),
                  SchemaError);
  CHECK_THROWS_AS(TableSchema({{"a", ColumnKind::continuous, ColumnRole::condition}}), SchemaError);
  CHECK_THROWS_AS(TableSchema::from_json(nlohmann::json::parse(R"({"columns":[{"name":"a","kind":"text"}]})")),
                  SchemaError);
}

TEST_CASE("load_csv") {
  const auto schema = age_gender_schema();

  SUBCASE("three rows in order") {
    const auto t = parse("age,gender\n40,Male\n52.5,Female\n90,Male\n", schema);
    CHECK(t.rows() == 3);
    CHECK(t.column("age").values == std::vector<double>{40, 52.5, 90});
    CHECK(t.column("gender").labels == std::vector<std::string>{"Male", "Female", "Male"});
  }
  SUBCASE("extra columns are ignored") {
    const auto t = parse("id,gender,notes,age\n1,Male,\"a, b\",40\n2,Female,x,41\n", schema);
    CHECK(t.cols() == 2);
    CHECK(t.column("age").values == std::vector<double>{40, 41});
  }
  SUBCASE("unparseable continuous cell names row and column") {
    try {
      parse("age,gender\n40,Male\nabc,Female\n", schema);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.row() == 1);
      CHECK(e.column() == "age");
      CHECK(std::string(e.what()).find("age") != std::string::npos);
    }
  }
  SUBCASE("missing column is named") {
    try {
      parse("age\n40\n", schema);
      FAIL("expected a schema error");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find("gender") != std::string::npos);
    }
  }
  SUBCASE("empty data and missing values") {
    CHECK_THROWS_AS(parse("age,gender\n", schema), ArgumentError);
    CHECK_THROWS_AS(parse("age,gender\n,Male\n", schema), ParseError);
  }
  SUBCASE("quoted fields, CRLF and BOM") {
    const auto t = parse("\xEF\xBB\xBF" "age,gender\r\n1,\"M \"\"x\"\", y\"\r\n", schema);
    CHECK(t.column("gender").labels.front() == "M \"x\", y");
  }
  SUBCASE("write then read is lossless") {
    RawTable t;
    t.add_column({"age", ColumnKind::continuous, {0.1, 1e-17, 123456789.123}, {}});
    t.add_column({"gender", ColumnKind::discrete, {}, {"a,b", "q\"", "plain"}});
    std::ostringstream out;
    write_csv(t, out);
    CHECK(parse(out.str(), schema) == t);
  }
}

TEST_CASE("fit_transforms") {
  RawTable t;
  std::vector<double> ages;
  std::vector<std::string> genders;
  for (int a = 15; a <= 90; ++a) {
    ages.push_back(a);
    genders.push_back(a % 2 ? "Male" : "Female");
  }
  t.add_column({"age", ColumnKind::continuous, ages, {}});
  t.add_column({"gender", ColumnKind::discrete, {}, genders});
  const auto tr = fit_transforms(t, age_gender_schema());
  CHECK(tr.at("age").min == 15.0);
  CHECK(tr.at("age").max == 90.0);
  CHECK(tr.at("gender").vocabulary == std::vector<std::string>{"Female", "Male"});
  CHECK(tr.layout().width == 3);

  SUBCASE("row order does not matter") {
    std::vector<std::size_t> perm(t.rows());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(3);
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
    CHECK(fit_transforms(t.select_rows(perm), age_gender_schema()) == tr);
  }
  SUBCASE("single row is degenerate") {
    const std::vector<std::size_t> one = {0};
    CHECK_THROWS_AS(fit_transforms(t.select_rows(one), age_gender_schema()), DegenerateColumnError);
    FitOptions lenient;
    lenient.allow_degenerate = true;
    const auto e = encode(t.select_rows(one), fit_transforms(t.select_rows(one), age_gender_schema(), lenient));
    CHECK(e.values(0, 0) == 0.0);
  }
  SUBCASE("json round trip") { CHECK(TransformSet::from_json(tr.to_json()) == tr); }
}

TEST_CASE("encode and decode examples") {
  TableSchema schema({{"age", ColumnKind::continuous, ColumnRole::feature},
                      {"ethnicity", ColumnKind::discrete, ColumnRole::feature}});
  const std::vector<std::string> eth = {"African American", "Asian", "Caucasian", "Hispanic", "Native American",
                                        "Other/Unknown"};
  RawTable t;
  t.add_column({"age", ColumnKind::continuous, {15, 52.5, 90, 40, 33, 61}, {}});
  t.add_column({"ethnicity", ColumnKind::discrete, {}, {eth[2], eth[0], eth[1], eth[3], eth[4], eth[5]}});
  const auto tr = fit_transforms(t, schema);
  const auto m = encode(t, tr);
  CHECK(m.values(0, 0) == 0.0);
  CHECK(m.values(1, 0) == 0.5);
  CHECK(m.values(2, 0) == 1.0);
  // Caucasian is index 2 in the sorted vocabulary.
  for (int c = 0; c < 6; ++c) CHECK(m.values(0, 1 + c) == (c == 2 ? 1.0 : 0.0));
  CHECK(satisfies_encoding_invariants(m));

  SUBCASE("inverse scaling and argmax") {
    EncodedMatrix soft = m;
    soft.values.row(0) << 0.5, 0.1, 0.7, 0.2, 0.0, 0.0, 0.0;
    soft.values.row(1) << 1.2, 0.3, 0.3, 0.1, 0.1, 0.1, 0.1;  // tie, out of range
    const auto d = decode(soft, tr);
    CHECK(d.column("age").values[0] == 52.5);
    CHECK(d.column("ethnicity").labels[0] == "Asian");
    CHECK(d.column("age").values[1] == 90.0);
    CHECK(d.column("ethnicity").labels[1] == "African American");
  }
  SUBCASE("round trip of the table is identical") { CHECK(decode(m, tr) == t); }
  SUBCASE("unseen category") {
    RawTable u;
    u.add_column({"age", ColumnKind::continuous, {20}, {}});
    u.add_column({"ethnicity", ColumnKind::discrete, {}, {"Martian"}});
    try {
      encode(u, tr);
      FAIL("expected a vocabulary error");
    } catch (const VocabularyError& e) {
      CHECK(std::string(e.what()).find("Martian") != std::string::npos);
      CHECK(std::string(e.what()).find("ethnicity") != std::string::npos);
    }
    const auto z = encode(u, tr, UnseenCategory::zero_block);
    CHECK(z.values.row(0).tail(6).sum() == 0.0);
  }
  SUBCASE("layout mismatch") {
    EncodedMatrix bad = m;
    bad.layout = bad.layout.without("age");
    bad.values = bad.values.rightCols(6).eval();
    CHECK_THROWS_AS(decode(bad, tr), StateError);
  }
  SUBCASE("values outside the fitted range are clipped on encode") {
    RawTable o;
    o.add_column({"age", ColumnKind::continuous, {5, 100}, {}});
    o.add_column({"ethnicity", ColumnKind::discrete, {}, {eth[0], eth[0]}});
    const auto e = encode(o, tr);
    CHECK(e.values(0, 0) == 0.0);
    CHECK(e.values(1, 0) == 1.0);
  }
}

TEST_CASE("encode/decode round trip on random tables") {
  Rng rng(20240611);
  for (int i = 0; i < 200; ++i) {
    const auto rt = testing::random_table(rng);
    const auto tr = fit_transforms(rt.table, rt.schema);
    const auto m = encode(rt.table, tr);
    REQUIRE(satisfies_encoding_invariants(m));
    const auto err = testing::compare_tables(rt.table, decode(m, tr), rt.schema);
    CHECK(err.discrete_exact);
    CHECK(err.continuous <= 1e-9);
  }
}

TEST_CASE("split_table") {
  RawTable t;
  std::vector<double> v(10);
  std::iota(v.begin(), v.end(), 0.0);
  t.add_column({"x", ColumnKind::continuous, v, {}});
  const auto [train, test] = split_table(t, 0.8, 7);
  CHECK(train.rows() == 8);
  CHECK(test.rows() == 2);
  auto all = train.column("x").values;
  all.insert(all.end(), test.column("x").values.begin(), test.column("x").values.end());
  std::sort(all.begin(), all.end());
  CHECK(all == v);
  CHECK(split_table(t, 0.8, 7).first == train);
  CHECK_THROWS_AS(split_table(t, 0.99, 7), ArgumentError);
  CHECK_THROWS_AS(split_table(t, 1.0, 7), ArgumentError);
}

TEST_CASE("sample_batch") {
  Rng data_rng(11);
  const auto raw = make_standin_dataset(default_standin_spec(), 2000, data_rng);
  TableSchema schema({{"age", ColumnKind::continuous, ColumnRole::feature},
                      {"ethnicity", ColumnKind::discrete, ColumnRole::feature}});
  const auto m = encode(raw, fit_transforms(raw, schema));

  SUBCASE("batch size and reproducibility") {
    Rng a(5), b(5);
    const auto x = sample_batch(m, 32, a);
    CHECK(x.rows() == 32);
    CHECK(x.values == sample_batch(m, 32, b).values);
    CHECK_THROWS_AS(sample_batch(m, 0, a), ArgumentError);
  }
  SUBCASE("single row") {
    const std::vector<std::size_t> first = {0};
    const auto one = gather_rows(m, first);
    Rng rng(1);
    CHECK(sample_batch(one, 1, rng).values == one.values);
  }
  SUBCASE("balanced draws are uniform over categories") {
    Rng rng(9);
    const auto x = sample_batch(m, 10000, rng, std::string("ethnicity"));
    const auto& block = x.layout.at("ethnicity");
    const double k = block.width;
    const double p = 1.0 / k;
    const double sigma = std::sqrt(10000.0 * p * (1.0 - p));
    for (int c = 0; c < block.width; ++c) {
      const double count = x.values.col(block.offset + c).sum();
      CHECK(std::abs(count - 10000.0 * p) <= 3.0 * sigma);
    }
  }
  SUBCASE("balancing on a continuous column is rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_batch(m, 4, rng, std::string("age")), ArgumentError);
  }
}

TEST_CASE("stand-in dataset") {
  const auto& spec = default_standin_spec();

  SUBCASE("default spec, 2027 rows, age mean") {
    Rng rng(2027);
    const auto t = make_standin_dataset(spec, 2027, rng);
    CHECK(t.rows() == 2027);
    // Tolerance 3 sd / sqrt(n) around the cohort mean.
    CHECK(std::abs(mean(t.column("age").values) - 63.3) <= 3.0 * 17.72 / std::sqrt(2027.0));
    for (double a : t.column("age").values) {
      CHECK(a >= 15.0);
      CHECK(a <= 90.0);
      CHECK(a == std::round(a));
    }
  }
  SUBCASE("rows are reproducible and schema-compatible") {
    Rng a(1), b(1);
    const auto t = make_standin_dataset(spec, 50, a);
    CHECK(t == make_standin_dataset(spec, 50, b));
    CHECK(t.cols() == spec.schema().size());
  }
  SUBCASE("zero rows") {
    Rng rng(1);
    CHECK_THROWS_AS(make_standin_dataset(spec, 0, rng), ArgumentError);
  }
  SUBCASE("native american conditional age mean") {
    StandinSpec only = spec;
    auto& eth = only.columns.front();
    REQUIRE(eth.name == "ethnicity");
    for (std::size_t i = 0; i < eth.categories.size(); ++i) eth.weights[i] = eth.categories[i] == "Native American";
    Rng rng(77);
    const std::size_t n = 20000;
    const auto t = make_standin_dataset(only, n, rng);
    CHECK(std::abs(mean(t.column("age").values) - 50.5) <= 3.0 * 19.5 / std::sqrt(static_cast<double>(n)));
  }
  SUBCASE("weights must sum to one") {
    auto j = to_json(spec);
    CHECK(standin_from_json(j).columns.size() == spec.columns.size());
    j["columns"][2]["weights"] = {0.46, 0.5400001};
    CHECK_THROWS_AS(standin_from_json(j), ArgumentError);
  }
  SUBCASE("conditioning must reference an earlier column") {
    auto j = to_json(spec);
    std::swap(j["columns"][0], j["columns"][1]);
    CHECK_THROWS_AS(standin_from_json(j), ArgumentError);
  }
  SUBCASE("shipped spec file matches the built-in spec") {
    const auto path = std::filesystem::path(DISCGAN_SOURCE_DIR) / "data" / "standin_default.json";
    CHECK(to_json(load_standin_spec(path)) == to_json(spec));
  }
}
