#include "discgan/data/standin.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "discgan/errors.hpp"

namespace discgan::data {

namespace {

void check_weights(const std::vector<double>& w, std::size_t expected, const std::string& where) {
  if (w.size() != expected) {
    throw ArgumentError(where + ": expected " + std::to_string(expected) + " weights, got " + std::to_string(w.size()));
  }
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ArgumentError(where + ": weights must be finite and non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError(where + ": weights sum to " + std::to_string(sum) + ", not 1");
}

void check_mixture(const std::vector<MixtureComponent>& m, const std::string& where) {
  if (m.empty()) throw ArgumentError(where + ": mixture has no components");
  std::vector<double> w;
  for (const auto& c : m) {
    if (!(c.sd > 0.0) || !std::isfinite(c.mean)) throw ArgumentError(where + ": components need finite mean and sd > 0");
    w.push_back(c.weight);
  }
  check_weights(w, w.size(), where);
}

std::size_t draw_index(const std::vector<double>& weights, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  // Rounding can leave u just above the final cumulative sum.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return 0;
}

double draw_mixture(const std::vector<MixtureComponent>& mixture, Rng& rng) {
  std::vector<double> w;
  w.reserve(mixture.size());
  for (const auto& c : mixture) w.push_back(c.weight);
  const auto& c = mixture[draw_index(w, rng)];
  return rng.normal(c.mean, c.sd);
}

std::vector<MixtureComponent> mixture_from_json(const nlohmann::json& j) {
  std::vector<MixtureComponent> out;
  for (const auto& c : j) out.push_back({c.at("weight").get<double>(), c.at("mean").get<double>(), c.at("sd").get<double>()});
  return out;
}

nlohmann::json mixture_to_json(const std::vector<MixtureComponent>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : m) out.push_back({{"weight", c.weight}, {"mean", c.mean}, {"sd", c.sd}});
  return out;
}

void validate(const StandinSpec& spec) {
  if (spec.columns.empty()) throw ArgumentError("stand-in spec has no columns");
  std::map<std::string, const StandinColumn*> seen;
  for (const auto& c : spec.columns) {
    const std::string where = "stand-in column '" + c.name + "'";
    if (seen.contains(c.name)) throw ArgumentError(where + " is declared twice");
    const StandinColumn* parent = nullptr;
    if (c.given_column) {
      auto it = seen.find(*c.given_column);
      if (it == seen.end()) throw ArgumentError(where + " is conditioned on '" + *c.given_column + "', which must come earlier");
      parent = it->second;
      if (parent->kind != ColumnKind::discrete) throw ArgumentError(where + " must be conditioned on a discrete column");
    }
    if (c.kind == ColumnKind::discrete) {
      if (c.categories.empty()) throw ArgumentError(where + " has no categories");
      if (std::set<std::string>(c.categories.begin(), c.categories.end()).size() != c.categories.size()) {
        throw ArgumentError(where + " has duplicate categories");
      }
      if (parent) {
        for (const auto& pc : parent->categories) {
          auto it = c.given_weights.find(pc);
          if (it == c.given_weights.end()) throw ArgumentError(where + " has no weights for '" + pc + "'");
          check_weights(it->second, c.categories.size(), where + " given '" + pc + "'");
        }
      } else {
        check_weights(c.weights, c.categories.size(), where);
      }
    } else {
      if (parent) {
        for (const auto& pc : parent->categories) {
          auto it = c.given_mixtures.find(pc);
          if (it == c.given_mixtures.end()) throw ArgumentError(where + " has no mixture for '" + pc + "'");
          check_mixture(it->second, where + " given '" + pc + "'");
        }
      } else {
        check_mixture(c.mixture, where);
      }
      if (c.clip && !(c.clip->first <= c.clip->second)) throw ArgumentError(where + " has an empty clip range");
    }
    seen.emplace(c.name, &c);
  }
}

StandinColumn binary(std::string name, double p) {
  StandinColumn c;
  c.name = std::move(name);
  c.kind = ColumnKind::discrete;
  c.categories = {"0", "1"};
  c.weights = {1.0 - p, p};
  return c;
}

StandinSpec build_default_spec() {
  StandinSpec spec;
  const std::vector<std::string> ethnicities = {"African American", "Caucasian", "Native American",
                                                "Asian", "Hispanic", "Other/Unknown"};
  {
    StandinColumn c;
    c.name = "ethnicity";
    c.kind = ColumnKind::discrete;
    c.categories = ethnicities;
    // Demo-cohort counts out of 2500 unit stays.
    c.weights = {230 / 2500.0, 2010 / 2500.0, 12 / 2500.0, 38 / 2500.0, 92 / 2500.0, 118 / 2500.0};
    spec.columns.push_back(std::move(c));
  }
  {
    // Pre-clip normal parameters chosen so that the rounded, clipped ages
    // have the per-class means/sds 56.2/16.8, 64.4/17.4 and 50.5/19.5; the
    // remaining classes share the residual that brings the whole cohort to
    // mean 63.3 and sd 17.72.
    StandinColumn c;
    c.name = "age";
    c.kind = ColumnKind::continuous;
    c.round = true;
    c.clip = std::pair{15.0, 90.0};
    c.given_column = "ethnicity";
    c.given_mixtures = {{"African American", {{1.0, 56.3215, 17.3302}}},
                        {"Caucasian", {{1.0, 65.2421, 19.0448}}},
                        {"Native American", {{1.0, 50.3433, 20.8568}}},
                        {"Asian", {{1.0, 62.4363, 21.0178}}},
                        {"Hispanic", {{1.0, 62.4363, 21.0178}}},
                        {"Other/Unknown", {{1.0, 62.4363, 21.0178}}}};
    spec.columns.push_back(std::move(c));
  }
  {
    StandinColumn c;
    c.name = "gender";
    c.kind = ColumnKind::discrete;
    c.categories = {"Female", "Male"};
    c.weights = {0.46, 0.54};
    spec.columns.push_back(std::move(c));
  }
  {
    StandinColumn c;
    c.name = "unittype";
    c.kind = ColumnKind::discrete;
    c.categories = {"Cardiac ICU", "CTICU", "CSICU", "MICU", "Neuro ICU", "SICU", "Med-Surg ICU"};
    c.weights = {133 / 2500.0, 52 / 2500.0, 65 / 2500.0, 150 / 2500.0, 180 / 2500.0, 100 / 2500.0, 1820 / 2500.0};
    spec.columns.push_back(std::move(c));
  }
  {
    StandinColumn c;
    c.name = "hospitaldischargeoffset";
    c.kind = ColumnKind::continuous;
    c.round = true;
    c.clip = std::pair{30.0, 60000.0};
    c.mixture = {{0.6, 5000.0, 2500.0}, {0.3, 11000.0, 4000.0}, {0.1, 25000.0, 8000.0}};
    spec.columns.push_back(std::move(c));
  }
  const std::vector<double> all_weights = {0.2, 0.22, 0.2, 0.15, 0.1, 0.06, 0.04, 0.02, 0.01};
  {
    StandinColumn c;
    c.name = "All";
    c.kind = ColumnKind::discrete;
    for (int i = 0; i < 9; ++i) c.categories.push_back(std::to_string(i));
    c.weights = all_weights;
    spec.columns.push_back(std::move(c));
  }
  {
    StandinColumn c = binary("CHF", 0.0);
    c.weights.clear();
    c.given_column = "All";
    const double p[] = {0.02, 0.06, 0.10, 0.16, 0.22, 0.28, 0.34, 0.40, 0.46};
    for (int i = 0; i < 9; ++i) c.given_weights[std::to_string(i)] = {1.0 - p[i], p[i]};
    spec.columns.push_back(std::move(c));
  }
  {
    StandinColumn c = binary("NoHealthProblems", 0.0);
    c.weights.clear();
    c.given_column = "All";
    for (int i = 0; i < 9; ++i) c.given_weights[std::to_string(i)] = i == 0 ? std::vector{0.5, 0.5} : std::vector{0.99, 0.01};
    spec.columns.push_back(std::move(c));
  }
  spec.columns.push_back(binary("homeoxygen", 0.04));
  {
    StandinColumn c = binary("COPD_severe", 0.0);
    c.weights.clear();
    c.given_column = "homeoxygen";
    c.given_weights = {{"0", {0.985, 0.015}}, {"1", {0.5, 0.5}}};
    spec.columns.push_back(std::move(c));
  }
  spec.columns.push_back(binary("COPD_moderate", 0.05));
  spec.columns.push_back(binary("COPD_nolimitations", 0.04));
  spec.columns.push_back(binary("asthma", 0.06));
  spec.columns.push_back(binary("hypertensionrequiringtreatment", 0.45));
  spec.columns.push_back(binary("restrictivepulmonarydisease", 0.02));
  {
    StandinColumn c;
    c.name = "dischargestatus";
    c.kind = ColumnKind::discrete;
    c.categories = {"Alive", "Expired", "Other"};
    c.weights = {0.9, 0.085, 0.015};
    spec.columns.push_back(std::move(c));
  }
  validate(spec);
  return spec;
}

}  // namespace

TableSchema StandinSpec::schema() const {
  std::vector<ColumnSpec> cols;
  for (const auto& c : columns) cols.push_back({c.name, c.kind, ColumnRole::feature});
  return TableSchema(std::move(cols));
}

StandinSpec standin_from_json(const nlohmann::json& j) {
  StandinSpec spec;
  try {
    for (const auto& cj : j.at("columns")) {
      StandinColumn c;
      c.name = cj.at("name").get<std::string>();
      const std::string kind = cj.at("kind").get<std::string>();
      if (kind != "continuous" && kind != "discrete") {
        throw ArgumentError("stand-in column '" + c.name + "' has unknown kind '" + kind + "'");
      }
      c.kind = kind == "continuous" ? ColumnKind::continuous : ColumnKind::discrete;
      if (cj.contains("categories")) c.categories = cj.at("categories").get<std::vector<std::string>>();
      if (cj.contains("weights")) c.weights = cj.at("weights").get<std::vector<double>>();
      if (cj.contains("mixture")) c.mixture = mixture_from_json(cj.at("mixture"));
      c.round = cj.value("round", false);
      if (cj.contains("clip")) {
        const auto clip = cj.at("clip").get<std::vector<double>>();
        if (clip.size() != 2) throw ArgumentError("stand-in column '" + c.name + "': clip needs [low, high]");
        c.clip = std::pair{clip[0], clip[1]};
      }
      if (cj.contains("given")) {
        const auto& g = cj.at("given");
        c.given_column = g.at("column").get<std::string>();
        if (g.contains("weights")) {
          for (const auto& [k, v] : g.at("weights").items()) c.given_weights[k] = v.get<std::vector<double>>();
        }
        if (g.contains("mixtures")) {
          for (const auto& [k, v] : g.at("mixtures").items()) c.given_mixtures[k] = mixture_from_json(v);
        }
      }
      spec.columns.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed stand-in spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

nlohmann::json to_json(const StandinSpec& spec) {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : spec.columns) {
    nlohmann::json cj = {{"name", c.name}, {"kind", std::string(to_string(c.kind))}};
    if (!c.categories.empty()) cj["categories"] = c.categories;
    if (!c.weights.empty()) cj["weights"] = c.weights;
    if (!c.mixture.empty()) cj["mixture"] = mixture_to_json(c.mixture);
    if (c.round) cj["round"] = true;
    if (c.clip) cj["clip"] = {c.clip->first, c.clip->second};
    if (c.given_column) {
      nlohmann::json g = {{"column", *c.given_column}};
      if (!c.given_weights.empty()) g["weights"] = c.given_weights;
      if (!c.given_mixtures.empty()) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [k, v] : c.given_mixtures) m[k] = mixture_to_json(v);
        g["mixtures"] = std::move(m);
      }
      cj["given"] = std::move(g);
    }
    cols.push_back(std::move(cj));
  }
  return {{"columns", std::move(cols)}};
}

StandinSpec load_standin_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open stand-in spec " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("stand-in spec " + path.string() + " is not valid JSON: " + e.what());
  }
  return standin_from_json(j);
}

const StandinSpec& default_standin_spec() {
  static const StandinSpec spec = build_default_spec();
  return spec;
}

RawTable make_standin_dataset(const StandinSpec& spec, std::size_t n, Rng& rng) {
  if (n == 0) throw ArgumentError("stand-in row count must be positive");
  validate(spec);
  const std::size_t k = spec.columns.size();
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < k; ++i) position[spec.columns[i].name] = i;

  std::vector<Column> cols;
  for (const auto& c : spec.columns) {
    Column col{c.name, c.kind, {}, {}};
    (c.kind == ColumnKind::continuous ? col.values.reserve(n) : col.labels.reserve(n));
    cols.push_back(std::move(col));
  }

  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      const StandinColumn& c = spec.columns[i];
      const std::string* parent_label = nullptr;
      if (c.given_column) parent_label = &cols[position.at(*c.given_column)].labels[r];
      if (c.kind == ColumnKind::discrete) {
        const auto& w = parent_label ? c.given_weights.at(*parent_label) : c.weights;
        cols[i].labels.push_back(c.categories[draw_index(w, rng)]);
      } else {
        double x = draw_mixture(parent_label ? c.given_mixtures.at(*parent_label) : c.mixture, rng);
        if (c.round) x = std::round(x);
        if (c.clip) x = std::clamp(x, c.clip->first, c.clip->second);
        cols[i].values.push_back(x);
      }
    }
  }

  RawTable table;
  for (auto& col : cols) table.add_column(std::move(col));
  return table;
}

}  // namespace discgan::data
