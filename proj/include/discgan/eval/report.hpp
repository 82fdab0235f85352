#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "discgan/data/schema.hpp"
#include "discgan/data/table.hpp"
#include "discgan/eval/chi2.hpp"
#include "discgan/eval/efficacy.hpp"
#include "discgan/eval/ks.hpp"

namespace discgan::eval {

/// 1 - |1 - generated / real|. Equals 1 exactly when the two agree and
/// penalizes over- and undershoot symmetrically. UndefinedMetricError when
/// `real` is zero.
double kstc(double ks_generated, double ks_real);
double cstc(double cs_generated, double cs_real);
double mlec(double mle_generated, double mle_real);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct ReportOptions {
  SplitSpec split;
  CsMode cs_mode = CsMode::counts;
  EfficacyOptions efficacy;
  std::vector<Classifier> classifiers = {Classifier::tree, Classifier::mlp};
  nlohmann::ordered_json extra_echo = nlohmann::ordered_json::object();
};

struct MleEntry {
  std::string target;
  Classifier classifier = Classifier::tree;
  EfficacyResult real;       // trained on the real train split
  EfficacyResult generated;  // trained on the generated train split
  double mlec = 0.0;
};

/// Scores of one (train side vs real test split) comparison.
struct SplitScores {
  std::optional<double> ks_test;
  std::optional<double> cs_test;
};

struct MetricsReport {
  // Generated table against the full real table.
  std::optional<double> ks_test;
  std::optional<double> cs_test;
  std::optional<double> cs_test_frequencies;
  std::vector<KsColumn> ks_per_column;
  std::vector<CsColumn> cs_per_column;

  // Both tables are split with the same seeded 80/20 split. The baseline
  // compares the real train split with the real test split, the generated
  // side compares the generated train split with the real test split, and
  // classifiers are always scored on the real test split.
  SplitScores baseline;
  SplitScores generated;
  std::optional<double> kstc;
  std::optional<double> cstc;
  std::vector<MleEntry> mle;

  nlohmann::ordered_json config_echo;

  nlohmann::ordered_json to_json() const;
};

/// Runs the full battery. Targets must be discrete schema columns. KS values
/// are omitted when the schema has no continuous column and CS values when
/// it has no discrete column.
MetricsReport full_report(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema,
                          const std::vector<std::string>& targets, const ReportOptions& options = {});

}  // namespace discgan::eval
