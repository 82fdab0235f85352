#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "discgan/data/standin.hpp"
#include "discgan/dist/all_reduce.hpp"
#include "discgan/dist/step.hpp"
#include "discgan/errors.hpp"
#include "discgan/gan/train.hpp"
#include "discgan/nn/loss.hpp"

using namespace discgan;
using namespace discgan::dist;
using data::ColumnKind;
using data::ColumnRole;

namespace {

struct Fixture {
  data::TableSchema schema;
  data::TransformSet transforms;
  data::EncodedMatrix encoded;
};

Fixture fixture(gan::Preset preset) {
  std::vector<data::ColumnSpec> cols{{"age", ColumnKind::continuous, ColumnRole::feature}};
  if (preset == gan::Preset::cgan2d) cols.push_back({"ethnicity", ColumnKind::discrete, ColumnRole::condition});
  if (preset == gan::Preset::discgan) {
    cols.push_back({"gender", ColumnKind::discrete, ColumnRole::feature});
    cols.push_back({"unittype", ColumnKind::discrete, ColumnRole::feature});
    cols.push_back({"COPD_severe", ColumnKind::discrete, ColumnRole::target});
  }
  Rng rng(17);
  const auto table = data::make_standin_dataset(data::default_standin_spec(), 300, rng);
  Fixture f;
  f.schema = data::TableSchema(cols);
  f.transforms = data::fit_transforms(table, f.schema);
  f.encoded = data::encode(table, f.transforms);
  return f;
}

gan::GanConfig config(gan::Preset preset, DistConfig dc, double dropout = 0.1, int batch = 32) {
  gan::GanConfig cfg;
  cfg.preset = preset;
  cfg.seed = 5;
  cfg.steps = 100;
  cfg.eval_every = 100;
  cfg.batch_size = batch;
  cfg.dropout = dropout;
  cfg.distribution = dc;
  return cfg;
}

double max_abs_diff(const nn::Network& a, const nn::Network& b) {
  double worst = 0.0;
  const auto& pa = a.params().trainable;
  const auto& pb = b.params().trainable;
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) worst = std::max(worst, (pa[i] - pb[i]).cwiseAbs().maxCoeff());
  return worst;
}

bool same_bits(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols()) return false;
    if (std::memcmp(a[i].data(), b[i].data(), sizeof(double) * static_cast<std::size_t>(a[i].size())) != 0) {
      return false;
    }
  }
  return true;
}

bool same_model(const gan::GanModel& a, const gan::GanModel& b) {
  return same_bits(a.generator.params().trainable, b.generator.params().trainable) &&
         same_bits(a.generator.params().non_trainable, b.generator.params().non_trainable) &&
         same_bits(a.discriminator.params().trainable, b.discriminator.params().trainable) &&
         same_bits(a.generator_adam.m, b.generator_adam.m) && same_bits(a.discriminator_adam.v, b.discriminator_adam.v) &&
         a.generator_adam.t == b.generator_adam.t && a.discriminator_adam.t == b.discriminator_adam.t &&
         a.step == b.step;
}

// Fixed batch sequence drawn independently of the models under test.
std::vector<gan::SplitRows> batches(const gan::GanModel& model, const data::EncodedMatrix& data, int count) {
  Rng rng(99);
  const auto all = gan::split_condition(model, data);
  std::vector<gan::SplitRows> out;
  for (int i = 0; i < count; ++i) {
    gan::SplitRows b{Matrix(model.config.batch_size, all.features.cols()),
                     Matrix(model.config.batch_size, all.condition.cols())};
    for (Eigen::Index r = 0; r < b.features.rows(); ++r) {
      const auto src = static_cast<Eigen::Index>(rng.index(data.rows()));
      b.features.row(r) = all.features.row(src);
      if (b.condition.cols() > 0) b.condition.row(r) = all.condition.row(src);
    }
    out.push_back(std::move(b));
  }
  return out;
}

nn::GradSet random_grads(const nn::ParamSet& shape, Rng& rng) {
  auto g = nn::GradSet::zeros_like(shape);
  for (auto& t : g.tensors) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.normal();
  }
  return g;
}

}  // namespace

TEST_CASE("shard_batch examples") {
  data::EncodedMatrix m{Matrix(33, 2), {}};
  for (Eigen::Index i = 0; i < m.values.size(); ++i) m.values.data()[i] = static_cast<double>(i);

  auto s = shard_batch({m.values.topRows(32), {}}, 2);
  REQUIRE(s.size() == 2);
  CHECK(s[0].rows() == 16);
  CHECK(s[1].rows() == 16);

  s = shard_batch(m, 2);
  CHECK(s[0].rows() == 17);
  CHECK(s[1].rows() == 16);
  CHECK(s[1].values == m.values.bottomRows(16));

  s = shard_batch({m.values.topRows(32), {}}, 1);
  REQUIRE(s.size() == 1);
  CHECK(s[0].values == m.values.topRows(32));

  CHECK_THROWS_AS(shard_batch({m.values.topRows(3), {}}, 4), ArgumentError);
}

TEST_CASE("shards are contiguous, near-equal and cover the batch") {
  for (std::size_t rows = 1; rows <= 40; ++rows) {
    for (int w = 1; w <= static_cast<int>(std::min<std::size_t>(rows, 8)); ++w) {
      const auto ranges = shard_ranges(rows, w);
      REQUIRE(ranges.size() == static_cast<std::size_t>(w));
      Eigen::Index next = 0, lo = ranges[0].rows, hi = ranges[0].rows;
      for (const auto& r : ranges) {
        CHECK(r.begin == next);
        next += r.rows;
        lo = std::min(lo, r.rows);
        hi = std::max(hi, r.rows);
      }
      CHECK(next == static_cast<Eigen::Index>(rows));
      CHECK(hi - lo <= 1);
    }
  }
}

TEST_CASE("all_reduce_mean examples") {
  Rng rng(3);
  const auto f = fixture(gan::Preset::gan1d);
  const auto model = gan::make_model(config(gan::Preset::gan1d, {}), f.schema, f.transforms, f.encoded);
  const auto& shape = model.discriminator.params();
  const auto g = random_grads(shape, rng);

  for (int n : {1, 2, 4, 8}) {
    std::vector<nn::GradSet> same(static_cast<std::size_t>(n), g);
    CHECK(same_bits(all_reduce_mean(same).tensors, g.tensors));
  }
  std::vector<nn::GradSet> three(3, g);
  const auto m3 = all_reduce_mean(three);
  for (std::size_t k = 0; k < g.tensors.size(); ++k) CHECK((m3.tensors[k] - g.tensors[k]).cwiseAbs().maxCoeff() <= 1e-15);

  nn::GradSet neg = g;
  for (auto& t : neg.tensors) t = -t;
  const std::vector<nn::GradSet> pair{g, neg};
  for (const auto& t : all_reduce_mean(pair).tensors) CHECK(t.cwiseAbs().maxCoeff() == 0.0);

  std::vector<nn::GradSet> bad(3, g);
  bad[2].tensors[1] = Matrix::Zero(2, 2);
  try {
    all_reduce_mean(bad);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("worker 2") != std::string::npos);
  }
  CHECK_THROWS_AS(all_reduce_mean(std::vector<nn::GradSet>{}), ArgumentError);
}

TEST_CASE("all_reduce_mean uses a fixed pairwise tree") {
  Rng rng(8);
  const auto f = fixture(gan::Preset::gan1d);
  const auto model = gan::make_model(config(gan::Preset::gan1d, {}), f.schema, f.transforms, f.encoded);
  std::vector<nn::GradSet> gs;
  for (int i = 0; i < 5; ++i) gs.push_back(random_grads(model.discriminator.params(), rng));
  const auto a = all_reduce_mean(gs);
  const auto b = all_reduce_mean(gs);
  CHECK(same_bits(a.tensors, b.tensors));
  for (std::size_t k = 0; k < a.tensors.size(); ++k) {
    // ((g0 + g1) + (g2 + g3)) + g4, then / 5
    const Matrix expect = (((gs[0].tensors[k] + gs[1].tensors[k]) + (gs[2].tensors[k] + gs[3].tensors[k])) +
                           gs[4].tensors[k]) / 5.0;
    CHECK(same_bits({a.tensors[k]}, {expect}));
  }
}

TEST_CASE("mean of shard gradients equals the full-batch gradient") {
  // Oracle: one backward pass over the whole batch.
  const auto f = fixture(gan::Preset::discgan);
  auto cfg = config(gan::Preset::discgan, {}, 0.0);
  const auto model = gan::make_model(cfg, f.schema, f.transforms, f.encoded);
  const auto& d = model.discriminator;
  const Matrix batch = f.encoded.values.topRows(32);
  Rng unused(0);
  const auto full_fw = nn::forward(d, batch, nn::Mode::train, &unused);
  const auto full = nn::backward(d, full_fw.cache, nn::bce_loss(full_fw.output, 1.0).grad);

  for (int w : {1, 2, 4, 8}) {
    std::vector<nn::GradSet> parts;
    for (const auto& r : shard_ranges(32, w)) {
      const auto fw = nn::forward(d, batch.middleRows(r.begin, r.rows), nn::Mode::train, &unused);
      parts.push_back(nn::backward(d, fw.cache, nn::bce_loss(fw.output, 1.0).grad));
    }
    const auto mean = all_reduce_mean(parts);
    for (std::size_t k = 0; k < full.tensors.size(); ++k) {
      const double scale = std::max(1.0, full.tensors[k].cwiseAbs().maxCoeff());
      CHECK((mean.tensors[k] - full.tensors[k]).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    }
  }
}

TEST_CASE("one worker is identical to the undistributed step") {
  for (auto preset : {gan::Preset::gan1d, gan::Preset::discgan}) {
    const auto f = fixture(preset);
    for (auto scope : {Scope::discriminator, Scope::generator, Scope::both}) {
      auto plain = gan::make_model(config(preset, {}), f.schema, f.transforms, f.encoded);
      auto one = gan::make_model(config(preset, {1, scope, false}), f.schema, f.transforms, f.encoded);
      StepEngine ep(plain), e1(one);
      for (const auto& b : batches(plain, f.encoded, 30)) {
        const auto rp = ep.step(b.features, b.condition);
        const auto r1 = e1.step(b.features, b.condition);
        REQUIRE(rp.d_loss == r1.d_loss);
        REQUIRE(rp.g_loss == r1.g_loss);
      }
      CHECK(same_model(plain, one));
    }
  }
}

TEST_CASE("two-worker discriminator scope matches single-worker training") {
  // Dropout off; the generator may carry batch norm because it stays on one lane.
  for (auto preset : {gan::Preset::gan1d, gan::Preset::cgan2d, gan::Preset::discgan}) {
    for (int batch : {32, 33}) {
      CAPTURE(batch);
      const auto f = fixture(preset);
      auto single = gan::make_model(config(preset, {}, 0.0, batch), f.schema, f.transforms, f.encoded);
      auto dual = gan::make_model(config(preset, {2, Scope::discriminator, false}, 0.0, batch), f.schema,
                                  f.transforms, f.encoded);
      gan::train(single, f.encoded);
      gan::train(dual, f.encoded);
      CHECK(single.step == 100);
      CHECK(max_abs_diff(single.discriminator, dual.discriminator) <= 1e-6);
      CHECK(max_abs_diff(single.generator, dual.generator) <= 1e-6);
    }
  }
}

TEST_CASE("equivalence holds for 1, 2, 4 and 8 workers") {
  const auto f = fixture(gan::Preset::gan1d);
  auto single = gan::make_model(config(gan::Preset::gan1d, {}, 0.0), f.schema, f.transforms, f.encoded);
  single.config.steps = 30;
  gan::train(single, f.encoded);
  for (auto scope : {Scope::discriminator, Scope::generator, Scope::both}) {
    for (int w : {1, 2, 4, 8}) {
      CAPTURE(w);
      auto m = gan::make_model(config(gan::Preset::gan1d, {w, scope, false}, 0.0), f.schema, f.transforms, f.encoded);
      m.config.steps = 30;
      gan::train(m, f.encoded);
      CHECK(max_abs_diff(single.discriminator, m.discriminator) <= 1e-6);
      CHECK(max_abs_diff(single.generator, m.generator) <= 1e-6);
    }
  }
}

TEST_CASE("mirrored invariant after every step") {
  for (auto preset : {gan::Preset::cgan2d, gan::Preset::discgan}) {
    const auto f = fixture(preset);
    for (auto scope : {Scope::discriminator, Scope::generator, Scope::both}) {
      for (int w : {2, 4}) {
        for (bool sync : {false, true}) {
          auto model = gan::make_model(config(preset, {w, scope, sync}), f.schema, f.transforms, f.encoded);
          StepEngine engine(model);
          engine.set_check_every_step(false);
          for (const auto& b : batches(model, f.encoded, 25)) {
            engine.step(b.features, b.condition);
            REQUIRE_NOTHROW(engine.replicas().check_mirrored());
          }
        }
      }
    }
  }
}

TEST_CASE("mirror check detects a diverged replica") {
  const auto f = fixture(gan::Preset::gan1d);
  auto model = gan::make_model(config(gan::Preset::gan1d, {2, Scope::both, false}), f.schema, f.transforms, f.encoded);
  ReplicaSet rs(model, model.config.distribution);
  CHECK_NOTHROW(rs.check_mirrored());
  auto& w = rs.discriminator(1).params().trainable[0];
  w(0, 0) = std::nextafter(w(0, 0), 1e9);
  CHECK_THROWS_AS(rs.check_mirrored(), StateError);
  rs.resync();
  CHECK_NOTHROW(rs.check_mirrored());
}

TEST_CASE("sync_batch_norm averages moving statistics across lanes") {
  const auto f = fixture(gan::Preset::discgan);
  auto model = gan::make_model(config(gan::Preset::discgan, {2, Scope::generator, true}), f.schema, f.transforms,
                               f.encoded);
  StepEngine engine(model);
  for (const auto& b : batches(model, f.encoded, 5)) engine.step(b.features, b.condition);
  CHECK(same_bits(engine.replicas().generator(0).params().non_trainable,
                  engine.replicas().generator(1).params().non_trainable));

  auto unsynced = gan::make_model(config(gan::Preset::discgan, {2, Scope::generator, false}), f.schema, f.transforms,
                                  f.encoded);
  StepEngine e2(unsynced);
  for (const auto& b : batches(unsynced, f.encoded, 5)) e2.step(b.features, b.condition);
  CHECK_FALSE(same_bits(e2.replicas().generator(0).params().non_trainable,
                        e2.replicas().generator(1).params().non_trainable));
}

TEST_CASE("a worker failure rolls back to the pre-step state") {
  for (auto scope : {Scope::discriminator, Scope::generator, Scope::both}) {
    for (int phase : {0, 1}) {
      const auto f = fixture(gan::Preset::discgan);
      auto model = gan::make_model(config(gan::Preset::discgan, {2, scope, false}), f.schema, f.transforms, f.encoded);
      auto reference = model;
      const auto bs = batches(model, f.encoded, 8);

      StepEngine engine(model);
      engine.set_fault_hook([&](int lane, std::int64_t step, int ph) {
        if (lane == 1 && step == 5 && ph == phase) throw std::runtime_error("injected");
      });
      StepEngine ref_engine(reference);
      for (int i = 0; i < 4; ++i) {
        engine.step(bs[i].features, bs[i].condition);
        ref_engine.step(bs[i].features, bs[i].condition);
      }
      const bool lane1_used = phase == 0 ? scope != Scope::generator : true;
      if (!lane1_used) continue;
      try {
        engine.step(bs[4].features, bs[4].condition);
        FAIL("expected WorkerFailure");
      } catch (const WorkerFailure& e) {
        CHECK(e.worker() == 1);
      }
      CHECK(same_model(model, reference));
      CHECK(model.rng.state() == reference.rng.state());
      CHECK_NOTHROW(engine.replicas().check_mirrored());

      // The retried step continues exactly like an uninterrupted run.
      engine.set_fault_hook({});
      for (int i = 4; i < 8; ++i) {
        engine.step(bs[i].features, bs[i].condition);
        ref_engine.step(bs[i].features, bs[i].condition);
      }
      CHECK(same_model(model, reference));
    }
  }
}

TEST_CASE("distributed runs are bitwise reproducible") {
  const auto f = fixture(gan::Preset::discgan);
  auto a = gan::make_model(config(gan::Preset::discgan, {4, Scope::both, false}), f.schema, f.transforms, f.encoded);
  auto b = a;
  a.config.steps = b.config.steps = 20;
  const auto ta = gan::run_distributed_training(a, f.encoded);
  const auto tb = gan::run_distributed_training(b, f.encoded);
  CHECK(same_model(a, b));
  CHECK(ta.entries.back().d_loss == tb.entries.back().d_loss);
  CHECK(ta.step_seconds.size() == 20);
}
