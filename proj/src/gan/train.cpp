#include "discgan/gan/train.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "discgan/data/csv.hpp"
#include "discgan/data/sampler.hpp"
#include "discgan/errors.hpp"
#include "discgan/gan/checkpoint.hpp"

namespace discgan::gan {

namespace {

constexpr Eigen::Index kGenerateChunk = 4096;

std::string optional_cell(const std::optional<double>& v) { return v ? data::format_double(*v) : ""; }

}  // namespace

void TrainTrace::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "step,d_loss,g_loss,ks,cs\n";
  for (const auto& e : entries) {
    out << e.step << ',' << data::format_double(e.d_loss) << ',' << data::format_double(e.g_loss) << ','
        << optional_cell(e.ks) << ',' << optional_cell(e.cs) << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

void TrainTrace::write_timing_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "step,seconds\n";
  for (std::size_t i = 0; i < step_seconds.size(); ++i) out << i + 1 << ',' << data::format_double(step_seconds[i]) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

std::pair<double, double> train_step(GanModel& model, const data::EncodedMatrix& real_batch) {
  const auto split = split_condition(model, real_batch);
  dist::StepEngine engine(model);
  const auto r = engine.step(split.features, split.condition);
  return {r.d_loss, r.g_loss};
}

TrainTrace train(GanModel& model, const data::EncodedMatrix& data, const TrainOptions& options) {
  if (data.rows() == 0) throw ArgumentError("training data is empty");
  const GanConfig& cfg = model.config;
  const auto all = split_condition(model, data);
  const data::BatchSampler sampler(data, cfg.balance_on);
  dist::StepEngine engine(model);
  if (options.fault_hook) engine.set_fault_hook(options.fault_hook);

  TrainTrace trace;
  const std::int64_t first = model.step;
  const std::int64_t last = first + cfg.steps;
  Matrix x(cfg.batch_size, model.feature_width());
  Matrix c(cfg.batch_size, model.condition_width());
  while (model.step < last) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto idx = sampler.sample_indices(static_cast<std::size_t>(cfg.batch_size), model.rng);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(idx[i]);
      x.row(static_cast<Eigen::Index>(i)) = all.features.row(r);
      if (c.cols() > 0) c.row(static_cast<Eigen::Index>(i)) = all.condition.row(r);
    }
    const auto result = engine.step(x, c);
    trace.step_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    const std::int64_t done = model.step - first;
    if (done % cfg.eval_every == 0 || model.step == last) {
      TraceEntry e{model.step, result.d_loss, result.g_loss, std::nullopt, std::nullopt};
      if (options.evaluate) {
        const auto metrics = options.evaluate(model);
        e.ks = metrics.ks;
        e.cs = metrics.cs;
      }
      trace.entries.push_back(e);
      if (options.on_log) options.on_log(e);
      if (options.checkpoint && options.checkpoint_every_log && model.step != last) {
        save_checkpoint(model, *options.checkpoint);
      }
    }
  }
  if (engine.replicas().lanes() > 1) {
    engine.replicas().check_mirrored();
    trace.mirrored_lanes = engine.replicas().lanes();
  }
  if (options.checkpoint) save_checkpoint(model, *options.checkpoint);
  return trace;
}

TrainTrace run_distributed_training(GanModel& model, const data::EncodedMatrix& data, const TrainOptions& options) {
  if (model.config.distribution.scope == dist::Scope::none) {
    throw ConfigError("distribution.scope: distributed training needs a scope other than none");
  }
  return train(model, data, options);
}

data::EncodedMatrix generate(const GanModel& model, std::size_t n, const std::optional<std::string>& condition,
                             Rng& rng) {
  if (n == 0) throw ArgumentError("number of rows to generate must be positive");
  std::optional<int> pinned;
  if (condition) {
    if (!model.condition) throw ArgumentError("this model is not conditional; --condition is not allowed");
    const auto& v = model.condition->vocabulary;
    const auto it = std::find(v.begin(), v.end(), *condition);
    if (it == v.end()) {
      throw VocabularyError("condition '" + *condition + "' is not a category of column '" + model.condition->column + "'");
    }
    pinned = static_cast<int>(it - v.begin());
  }

  const auto total = static_cast<Eigen::Index>(n);
  Matrix features(total, model.feature_width());
  Matrix cond = Matrix::Zero(total, model.condition_width());
  for (Eigen::Index begin = 0; begin < total; begin += kGenerateChunk) {
    const Eigen::Index rows = std::min(kGenerateChunk, total - begin);
    Matrix z(rows, model.config.noise_dim);
    for (Eigen::Index k = 0; k < z.size(); ++k) z.data()[k] = rng.normal();
    Matrix cc = Matrix::Zero(rows, model.condition_width());
    if (model.condition) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        int k = 0;
        if (pinned) {
          k = *pinned;
        } else {
          const double u = rng.uniform();
          double acc = 0.0;
          k = model.condition->width() - 1;
          for (int j = 0; j < model.condition->width(); ++j) {
            acc += model.condition->marginal[static_cast<std::size_t>(j)];
            if (u < acc) {
              k = j;
              break;
            }
          }
        }
        cc(r, k) = 1.0;
      }
    }
    Matrix out = nn::predict(model.generator, hcat(z, cc));
    for (const auto& b : model.feature_layout.blocks) {
      if (b.kind == data::ColumnKind::continuous) {
        out.col(b.offset) = out.col(b.offset).cwiseMax(0.0).cwiseMin(1.0);
        continue;
      }
      for (Eigen::Index r = 0; r < rows; ++r) {
        auto seg = out.row(r).segment(b.offset, b.width);
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < b.width; ++j) {
          if (seg(j) > seg(best)) best = j;
        }
        seg.setZero();
        seg(best) = 1.0;
      }
    }
    features.middleRows(begin, rows) = out;
    if (cc.cols() > 0) cond.middleRows(begin, rows) = cc;
  }
  return join_condition(model, features, cond);
}

}  // namespace discgan::gan
