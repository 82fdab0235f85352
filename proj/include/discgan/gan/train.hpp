#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "discgan/data/transforms.hpp"
#include "discgan/dist/step.hpp"
#include "discgan/gan/model.hpp"

namespace discgan::gan {

struct TraceEntry {
  std::int64_t step = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
  std::optional<double> ks;
  std::optional<double> cs;
};

struct TrainTrace {
  std::vector<TraceEntry> entries;
  std::vector<double> step_seconds;  // wall clock of every step, in order
  int mirrored_lanes = 0;             // lanes verified mirrored at exit (0 when undistributed)

  void write_csv(const std::filesystem::path& path) const;         // step,d_loss,g_loss,ks,cs
  void write_timing_csv(const std::filesystem::path& path) const;  // step,seconds
};

struct InterimMetrics {
  std::optional<double> ks;
  std::optional<double> cs;
};

struct TrainOptions {
  // Called with every logged entry, on the training thread.
  std::function<void(const TraceEntry&)> on_log;
  // Optional interim evaluation at each logged step.
  std::function<InterimMetrics(const GanModel&)> evaluate;
  // Final checkpoint path; with checkpoint_every_log the checkpoint is also
  // rewritten at every logged step.
  std::optional<std::filesystem::path> checkpoint;
  bool checkpoint_every_log = false;
  dist::FaultHook fault_hook;
};

/// One training step on a batch of encoded real rows (full layout).
/// Non-distributed models use a single lane.
std::pair<double, double> train_step(GanModel& model, const data::EncodedMatrix& real_batch);

/// Runs model.config.steps steps, sampling batches of model.config.batch_size
/// rows with replacement (category-balanced when balance_on is set) from
/// the model's rng. Entries are logged every eval_every steps and at the
/// final step.
TrainTrace train(GanModel& model, const data::EncodedMatrix& data, const TrainOptions& options = {});

/// Same loop, required to run on a distributed scope.
TrainTrace run_distributed_training(GanModel& model, const data::EncodedMatrix& data, const TrainOptions& options = {});

/// n encoded rows from the generator in infer mode, discrete blocks hardened
/// to one-hot by argmax. Conditional models pin every row to `condition`
/// when given (VocabularyError if unknown) and otherwise draw the category
/// from the training marginal. Rows are produced in chunks, so memory stays
/// bounded for large n.
data::EncodedMatrix generate(const GanModel& model, std::size_t n, const std::optional<std::string>& condition,
                             Rng& rng);

}  // namespace discgan::gan
