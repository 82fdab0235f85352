#include "discgan/eval/report.hpp"

#include <cmath>

#include "discgan/errors.hpp"

namespace discgan::eval {

namespace {

double ratio_metric(double generated, double real, const char* name) {
  if (real == 0.0) throw UndefinedMetricError(std::string(name) + " is undefined when the real value is 0");
  return 1.0 - std::abs(1.0 - generated / real);
}

SplitScores split_scores(const data::RawTable& side, const data::RawTable& real_test, const data::TableSchema& schema,
                         CsMode mode) {
  SplitScores s;
  if (schema.count(data::ColumnKind::continuous) > 0) s.ks_test = ks_test_value(real_test, side, schema);
  if (schema.count(data::ColumnKind::discrete) > 0) s.cs_test = cs_test(real_test, side, schema, mode);
  return s;
}

nlohmann::ordered_json efficacy_json(const EfficacyResult& r) {
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (const auto& c : r.classes) classes.push_back({{"label", c.label}, {"support", c.support}, {"correct", c.correct}});
  return {{"accuracy", r.accuracy},
          {"macro_f1", r.macro_f1},
          {"n_train", r.n_train},
          {"n_test", r.n_test},
          {"unseen_test_rows", r.unseen_test_rows},
          {"classes", std::move(classes)}};
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

double kstc(double ks_generated, double ks_real) { return ratio_metric(ks_generated, ks_real, "KSTC"); }
double cstc(double cs_generated, double cs_real) { return ratio_metric(cs_generated, cs_real, "CSTC"); }
double mlec(double mle_generated, double mle_real) { return ratio_metric(mle_generated, mle_real, "MLEC"); }

MetricsReport full_report(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema,
                          const std::vector<std::string>& targets, const ReportOptions& options) {
  for (const auto& t : targets) {
    if (schema.at(t).kind != data::ColumnKind::discrete) {
      throw ArgumentError("target '" + t + "' must be a discrete column");
    }
  }
  MetricsReport rep;
  const bool has_continuous = schema.count(data::ColumnKind::continuous) > 0;
  const bool has_discrete = schema.count(data::ColumnKind::discrete) > 0;
  if (has_continuous) {
    rep.ks_per_column = ks_columns(real, gen, schema);
    rep.ks_test = ks_test_value(real, gen, schema);
  }
  if (has_discrete) {
    rep.cs_per_column = cs_columns(real, gen, schema, options.cs_mode);
    rep.cs_test = cs_test(real, gen, schema, options.cs_mode);
    rep.cs_test_frequencies = cs_test(real, gen, schema, CsMode::frequencies);
  }

  const auto [real_train, real_test] = split_table(real, options.split.train_fraction, options.split.seed);
  const auto [gen_train, gen_test] = split_table(gen, options.split.train_fraction, options.split.seed);
  rep.baseline = split_scores(real_train, real_test, schema, options.cs_mode);
  rep.generated = split_scores(gen_train, real_test, schema, options.cs_mode);
  if (has_continuous) rep.kstc = kstc(*rep.generated.ks_test, *rep.baseline.ks_test);
  if (has_discrete) rep.cstc = cstc(*rep.generated.cs_test, *rep.baseline.cs_test);

  for (const auto& target : targets) {
    for (const auto kind : options.classifiers) {
      MleEntry e;
      e.target = target;
      e.classifier = kind;
      e.real = ml_efficacy(real_train, real_test, schema, target, kind, options.efficacy);
      e.generated = ml_efficacy(gen_train, real_test, schema, target, kind, options.efficacy);
      e.mlec = mlec(e.generated.accuracy, e.real.accuracy);
      rep.mle.push_back(std::move(e));
    }
  }

  nlohmann::ordered_json classifiers = nlohmann::ordered_json::array();
  for (auto c : options.classifiers) classifiers.push_back(std::string(to_string(c)));
  rep.config_echo = {{"split", {{"train_fraction", options.split.train_fraction}, {"seed", options.split.seed}}},
                     {"cs_mode", options.cs_mode == CsMode::counts ? "counts" : "frequencies"},
                     {"targets", targets},
                     {"classifiers", std::move(classifiers)},
                     {"tree", {{"max_depth", options.efficacy.tree.max_depth}}},
                     {"mlp",
                      {{"hidden_width", options.efficacy.mlp.hidden_width},
                       {"epochs", options.efficacy.mlp.epochs},
                       {"lr", options.efficacy.mlp.lr},
                       {"seed", options.efficacy.mlp.seed}}},
                     {"real_rows", real.rows()},
                     {"generated_rows", gen.rows()}};
  for (const auto& [k, v] : options.extra_echo.items()) rep.config_echo[k] = v;
  return rep;
}

nlohmann::ordered_json MetricsReport::to_json() const {
  nlohmann::ordered_json per_column = nlohmann::ordered_json::object();
  for (const auto& c : ks_per_column) {
    per_column[c.column] = {{"kind", "continuous"}, {"ks_d", c.d}, {"ks_score", c.score}};
  }
  for (const auto& c : cs_per_column) {
    per_column[c.column] = {{"kind", "discrete"}, {"chi2", c.statistic}, {"dof", c.dof}, {"p_value", c.p_value}};
  }

  nlohmann::ordered_json mle_json = nlohmann::ordered_json::object();
  nlohmann::ordered_json mlec_json = nlohmann::ordered_json::object();
  nlohmann::ordered_json baseline_mle = nlohmann::ordered_json::object();
  nlohmann::ordered_json details = nlohmann::ordered_json::array();
  for (const auto& e : mle) {
    const std::string kind(eval::to_string(e.classifier));
    mle_json[e.target][kind] = e.generated.accuracy;
    mlec_json[e.target][kind] = e.mlec;
    baseline_mle[e.target][kind] = e.real.accuracy;
    details.push_back({{"target", e.target},
                       {"classifier", kind},
                       {"real", efficacy_json(e.real)},
                       {"generated", efficacy_json(e.generated)}});
  }

  nlohmann::ordered_json j;
  j["ks_test"] = optional_json(ks_test);
  j["cs_test"] = optional_json(cs_test);
  j["per_column"] = std::move(per_column);
  j["mle"] = std::move(mle_json);
  j["kstc"] = optional_json(kstc);
  j["cstc"] = optional_json(cstc);
  j["mlec"] = std::move(mlec_json);
  j["config_echo"] = config_echo;
  j["baseline"] = {{"ks_test", optional_json(baseline.ks_test)},
                   {"cs_test", optional_json(baseline.cs_test)},
                   {"mle", std::move(baseline_mle)}};
  j["comparison"] = {{"ks_test", optional_json(generated.ks_test)}, {"cs_test", optional_json(generated.cs_test)}};
  j["cs_test_frequencies"] = optional_json(cs_test_frequencies);
  j["mle_details"] = std::move(details);
  return j;
}

}  // namespace discgan::eval
