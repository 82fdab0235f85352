#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "discgan/cli/commands.hpp"
#include "discgan/cli/svg.hpp"
#include "discgan/data/csv.hpp"
#include "discgan/data/schema.hpp"

namespace fs = std::filesystem;
using discgan::cli::run_cli;

namespace {

const fs::path kSource = DISCGAN_SOURCE_DIR;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "discgan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("discgan_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// A run config with paths pointing into the source tree.
fs::path write_config(const fs::path& dir, nlohmann::json overrides, const std::string& schema = "age.json") {
  nlohmann::json j = {{"schema", (kSource / "data" / "schemas" / schema).string()},
                      {"standin", {{"n", 300}, {"seed", 7}}},
                      {"out", "run"},
                      {"preset", "gan1d"},
                      {"steps", 100},
                      {"eval_every", 25},
                      {"seed", 1}};
  j.merge_patch(overrides);
  const auto path = dir / "config.json";
  std::ofstream(path) << j.dump(2);
  return path;
}

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run({}).code == 2);
  CHECK(run({"fly"}).code == 2);
  CHECK(run({"standin"}).code == 2);
  CHECK(run({"generate", "--n", "5"}).code == 2);
  CHECK(run({"standin", "--out", "x.csv", "--n", "many"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("evaluate") != std::string::npos);
  CHECK(run({"train", "--help"}).code == 0);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("standin command") {
  TempDir tmp("standin");
  const auto a = tmp.path / "a.csv";
  const auto b = tmp.path / "b.csv";
  CHECK(run({"standin", "--out", a.string(), "--seed", "4"}).code == 0);
  CHECK(line_count(a) == 2028);
  CHECK(run({"standin", "--out", b.string(), "--seed", "4"}).code == 0);
  CHECK(slurp(a) == slurp(b));

  const auto spec = (kSource / "data" / "standin_default.json").string();
  CHECK(run({"standin", "--spec", spec, "--n", "50", "--out", b.string(), "--seed", "4"}).code == 0);
  CHECK(line_count(b) == 51);

  const auto zero = run({"standin", "--n", "0", "--out", a.string()});
  CHECK(zero.code == 2);
  CHECK(zero.err.find("--n") != std::string::npos);
  CHECK(run({"standin", "--spec", (tmp.path / "missing.json").string(), "--out", a.string()}).code == 2);
}

TEST_CASE("train smoke run writes checkpoint and traces") {
  TempDir tmp("train");
  const auto cfg = write_config(tmp.path, nlohmann::json::object());
  const auto r = run({"train", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  const auto out = tmp.path / "run";
  for (const char* f : {"model.json", "trace.csv", "timing.csv", "config.json", "real.csv"}) {
    CHECK(fs::exists(out / f));
  }
  CHECK(line_count(out / "trace.csv") == 1 + 4);
  CHECK(line_count(out / "timing.csv") == 1 + 100);
  CHECK(line_count(out / "real.csv") == 301);
  CHECK(r.out.find("step 100") != std::string::npos);

  // Same config twice gives the same model and trace losses.
  const auto first = slurp(out / "model.json");
  CHECK(run({"train", "--config", cfg.string(), "--out", (tmp.path / "again").string()}).code == 0);
  CHECK(slurp(tmp.path / "again" / "model.json") == first);
  CHECK(slurp(tmp.path / "again" / "trace.csv") == slurp(out / "trace.csv"));
}

TEST_CASE("train with interim metrics fills the trace columns") {
  TempDir tmp("interim");
  const auto cfg = write_config(tmp.path, {{"interim_eval_rows", 200}, {"steps", 50}});
  REQUIRE(run({"train", "--config", cfg.string()}).code == 0);
  std::ifstream in(tmp.path / "run" / "trace.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  // age-only schema: KS present, CS empty.
  CHECK(row.back() == ',');
  CHECK(std::count(row.begin(), row.end(), ',') == 4);
  CHECK(row.find(",,") == std::string::npos);
}

TEST_CASE("distributed training asserts the mirrored invariant") {
  TempDir tmp("dist");
  const auto cfg = write_config(
      tmp.path, {{"distribution", {{"workers", 2}, {"scope", "discriminator"}, {"sync_batch_norm", false}}}});
  const auto r = run({"train", "--config", cfg.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("mirrored invariant verified on 2 lanes") != std::string::npos);
}

TEST_CASE("train validation failures exit 2 naming the field") {
  TempDir tmp("badtrain");
  auto r = run({"train", "--config", write_config(tmp.path, {{"distribution", {{"scope", "galaxy"}}}}).string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("distribution.scope") != std::string::npos);

  r = run({"train", "--config", write_config(tmp.path, {{"noise_dim", 0}}).string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("noise_dim") != std::string::npos);

  r = run({"train", "--config", write_config(tmp.path, {{"preset", "cgan2d"}}).string()});
  CHECK(r.code == 2);

  r = run({"train", "--config", (tmp.path / "nope.json").string()});
  CHECK(r.code == 2);

  std::ofstream(tmp.path / "broken.json") << "{\"schema\": ";
  CHECK(run({"train", "--config", (tmp.path / "broken.json").string()}).code == 2);

  r = run({"train", "--config", write_config(tmp.path, {{"schema", "missing_schema.json"}}).string()});
  CHECK(r.code == 2);
}

TEST_CASE("generate command") {
  TempDir tmp("generate");
  const auto cfg = write_config(tmp.path, {{"preset", "cgan2d"}, {"steps", 30}}, "age_unittype.json");
  REQUIRE(run({"train", "--config", cfg.string()}).code == 0);
  const auto ckpt = (tmp.path / "run" / "model.json").string();

  const auto out = tmp.path / "gen.csv";
  CHECK(run({"generate", "--checkpoint", ckpt, "--n", "500", "--condition", "CSICU", "--out", out.string()}).code == 0);
  const auto schema = discgan::data::load_schema(kSource / "data" / "schemas" / "age_unittype.json");
  const auto table = discgan::data::load_csv(out, schema);
  CHECK(table.rows() == 500);
  for (const auto& label : table.column("unittype").labels) REQUIRE(label == "CSICU");

  CHECK(run({"generate", "--checkpoint", ckpt, "--n", "20", "--out", out.string(), "--seed", "3"}).code == 0);
  const auto first = slurp(out);
  CHECK(run({"generate", "--checkpoint", ckpt, "--n", "20", "--out", out.string(), "--seed", "3"}).code == 0);
  CHECK(slurp(out) == first);
  CHECK(line_count(out) == 21);

  CHECK(run({"generate", "--checkpoint", ckpt, "--n", "5", "--condition", "Mars", "--out", out.string()}).code == 2);
  CHECK(run({"generate", "--checkpoint", ckpt, "--n", "0", "--out", out.string()}).code == 2);
  CHECK(run({"generate", "--checkpoint", (tmp.path / "none.json").string(), "--n", "5", "--out", out.string()})
            .code == 2);

  // A corrupt checkpoint is a runtime failure.
  std::ofstream(tmp.path / "corrupt.json") << "{\"version\": 1}";
  const auto bad = run({"generate", "--checkpoint", (tmp.path / "corrupt.json").string(), "--n", "5", "--out",
                        out.string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("checkpoint") != std::string::npos);
}

TEST_CASE("evaluate command") {
  TempDir tmp("evaluate");
  const auto real = tmp.path / "real.csv";
  REQUIRE(run({"standin", "--n", "400", "--out", real.string(), "--seed", "2"}).code == 0);
  const auto schema = (kSource / "data" / "schemas" / "discgan.json").string();
  const auto out = tmp.path / "eval";

  const auto r = run({"evaluate", "--real", real.string(), "--gen", real.string(), "--schema", schema, "--targets",
                      "CHF,COPD_severe", "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report["ks_test"] == 1.0);
  CHECK(report["cs_test"] == 1.0);
  CHECK(report["kstc"] == 1.0);
  CHECK(report["mlec"]["CHF"]["tree"] == 1.0);
  CHECK(report["mlec"]["COPD_severe"]["mlp"] == 1.0);
  CHECK(report["config_echo"]["version"] == discgan::cli::kVersion);

  std::size_t svgs = 0;
  for (const auto& e : fs::directory_iterator(out)) svgs += e.path().extension() == ".svg";
  CHECK(svgs == 15);
  CHECK(fs::exists(out / "hist_age.svg"));
  CHECK(fs::exists(out / "bar_ethnicity.svg"));

  const auto again = tmp.path / "eval2";
  CHECK(run({"evaluate", "--real", real.string(), "--gen", real.string(), "--schema", schema, "--targets",
             "CHF,COPD_severe", "--out", again.string()})
            .code == 0);
  for (const auto& e : fs::directory_iterator(out)) CHECK(slurp(e.path()) == slurp(again / e.path().filename()));

  // Generated table lacking schema columns.
  const auto narrow = tmp.path / "narrow.csv";
  std::ofstream(narrow) << "age,gender\n50,F\n61,M\n";
  const auto bad = run({"evaluate", "--real", real.string(), "--gen", narrow.string(), "--schema", schema, "--out",
                        out.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("ethnicity") != std::string::npos);
  CHECK(bad.err.find("dischargestatus") != std::string::npos);

  CHECK(run({"evaluate", "--real", real.string(), "--gen", real.string(), "--schema", schema, "--targets", "age",
             "--out", out.string()})
            .code == 2);
}

TEST_CASE("svg output") {
  CHECK(discgan::cli::sturges_bins(10) == 10);
  CHECK(discgan::cli::sturges_bins(2027) == 12);
  CHECK(discgan::cli::sturges_bins(100000) == 18);
  const std::vector<double> a{1, 2, 3, 4}, b{2, 3, 3, 5};
  const auto h = discgan::cli::histogram_svg("age <years>", a, b);
  CHECK(h.rfind("<svg", 0) == 0);
  CHECK(h.find("age &lt;years&gt;") != std::string::npos);
  CHECK(h == discgan::cli::histogram_svg("age <years>", a, b));
  const std::vector<std::string> x{"a", "b"}, y{"b", "c"};
  const auto bars = discgan::cli::bar_chart_svg("g", x, y);
  CHECK(bars.find(">c</text>") != std::string::npos);
}

TEST_CASE("config paths resolve against the config file") {
  TempDir tmp("relative");
  fs::create_directories(tmp.path / "cfg");
  fs::copy_file(kSource / "data" / "schemas" / "age.json", tmp.path / "schema.json");
  std::ofstream(tmp.path / "cfg" / "run.json")
      << R"({"schema": "../schema.json", "standin": {"n": 100, "seed": 1}, "out": "../out",
             "preset": "gan1d", "steps": 3, "eval_every": 1})";
  const auto run_cfg = discgan::cli::RunConfig::load(tmp.path / "cfg" / "run.json");
  CHECK(fs::equivalent(run_cfg.schema, tmp.path / "schema.json"));
  CHECK(run({"train", "--config", (tmp.path / "cfg" / "run.json").string()}).code == 0);
  CHECK(line_count(tmp.path / "out" / "trace.csv") == 4);
}

TEST_CASE("shipped run configs load") {
  for (const auto& e : fs::directory_iterator(kSource / "configs")) {
    CAPTURE(e.path().string());
    const auto cfg = discgan::cli::RunConfig::load(e.path());
    CHECK(fs::exists(cfg.schema));
    REQUIRE(cfg.standin);
    CHECK(fs::exists(*cfg.standin->spec));
    const auto schema = discgan::data::load_schema(cfg.schema);
    for (const auto& t : cfg.targets) CHECK(schema.at(t).kind == discgan::data::ColumnKind::discrete);
  }
}
