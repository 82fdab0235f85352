#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "discgan/data/schema.hpp"
#include "discgan/data/table.hpp"
#include "discgan/rng.hpp"

namespace discgan::data {

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sd = 1.0;
};

/// Distribution of one stand-in column. A column either has its own
/// distribution (weights for discrete, mixture for continuous) or is
/// conditioned on an earlier discrete column through `given_column`, with
/// one distribution per parent category.
struct StandinColumn {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  std::vector<std::string> categories;  // discrete only, sampling order
  std::vector<double> weights;
  std::vector<MixtureComponent> mixture;
  std::optional<std::string> given_column;
  std::map<std::string, std::vector<double>> given_weights;
  std::map<std::string, std::vector<MixtureComponent>> given_mixtures;
  bool round = false;  // round continuous draws to the nearest integer
  std::optional<std::pair<double, double>> clip;
};

struct StandinSpec {
  std::vector<StandinColumn> columns;

  /// Schema with every column as a feature.
  TableSchema schema() const;
};

/// Parses and validates a stand-in spec. Weights must sum to 1 within 1e-9
/// (ArgumentError otherwise).
StandinSpec standin_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StandinSpec& spec);
StandinSpec load_standin_spec(const std::filesystem::path& path);

/// Built-in spec mimicking the eICU demo cohort: age by ethnicity (overall
/// mean about 63.3, sd about 17.72, clipped to 15..90), unit type, a
/// multi-modal discharge offset, the past-history count and flags, gender
/// and discharge status.
const StandinSpec& default_standin_spec();

/// Draws n i.i.d. rows, row by row in column order.
RawTable make_standin_dataset(const StandinSpec& spec, std::size_t n, Rng& rng);

}  // namespace discgan::data
