#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "discgan/eval/report.hpp"
#include "discgan/gan/config.hpp"
#include "discgan/gan/train.hpp"

namespace discgan::cli {

inline constexpr const char* kVersion = "0.1.0";

struct StandinArgs {
  std::optional<std::filesystem::path> spec;  // built-in default when absent
  std::size_t n = 2027;
  std::filesystem::path out;
  std::uint64_t seed = 0;
};

void cmd_standin(const StandinArgs& args);

/// Where training rows come from when no CSV is given.
struct StandinSource {
  std::optional<std::filesystem::path> spec;
  std::size_t n = 2027;
  std::uint64_t seed = 0;
};

/// A training run. Paths in the JSON file are relative to the file itself.
/// Keys: schema, data | standin{spec,n,seed}, out, targets,
/// interim_eval_rows, plus every GanConfig key at top level.
struct RunConfig {
  std::filesystem::path schema;
  std::optional<std::filesystem::path> data;
  std::optional<StandinSource> standin;
  std::filesystem::path out;
  std::vector<std::string> targets;
  std::size_t interim_eval_rows = 0;  // rows generated for the KS/CS trace columns; 0 disables
  gan::GanConfig gan;

  static RunConfig load(const std::filesystem::path& path);  // ConfigError on bad content
};

/// Trains and writes model.json, trace.csv, timing.csv, config.json and
/// real.csv (the training table) into the output directory. Progress lines
/// go to `log`.
gan::TrainTrace cmd_train(const RunConfig& run, std::ostream& log);

struct GenerateArgs {
  std::filesystem::path checkpoint;
  std::size_t n = 0;
  std::optional<std::string> condition;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;  // defaults to a stream of the model seed
};

void cmd_generate(const GenerateArgs& args);

struct EvaluateArgs {
  std::filesystem::path real;
  std::filesystem::path gen;
  std::filesystem::path schema;
  std::vector<std::string> targets;  // schema target columns when empty
  std::filesystem::path out;
  std::uint64_t seed = 0;
};

/// Writes report.json plus one SVG per schema column into `out`.
eval::MetricsReport cmd_evaluate(const EvaluateArgs& args);

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 runtime failure, 2 usage or validation failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace discgan::cli
