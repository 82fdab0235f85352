#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "discgan/data/schema.hpp"
#include "discgan/data/transforms.hpp"
#include "discgan/gan/config.hpp"
#include "discgan/nn/adam.hpp"
#include "discgan/nn/network.hpp"
#include "discgan/rng.hpp"

namespace discgan::gan {

/// The condition column of a conditional model: its vocabulary (one-hot
/// order) and the category frequencies of the training data, used when
/// generation is not pinned to a category.
struct ConditionInfo {
  std::string column;
  std::vector<std::string> vocabulary;
  std::vector<double> marginal;

  int width() const { return static_cast<int>(vocabulary.size()); }
};

struct GanModel {
  GanConfig config;
  data::TableSchema schema;
  data::TransformSet transforms;
  data::Layout feature_layout;  // encoded layout without the condition block
  std::optional<ConditionInfo> condition;
  nn::Network generator;
  nn::Network discriminator;
  nn::AdamState generator_adam;
  nn::AdamState discriminator_adam;
  Rng rng;
  std::int64_t step = 0;

  int feature_width() const { return feature_layout.width; }
  int condition_width() const { return condition ? condition->width() : 0; }
};

/// Generator chain for the preset. discgan: 3 x [dense, leaky_relu,
/// batch_norm], leaky_relu, dense(out), then a sigmoid per continuous
/// channel and a softmax per one-hot block of `layout`. gan1d/cgan2d:
/// 2 x [dense, leaky_relu], dense(1), sigmoid. Input width is
/// noise_dim + cond_width.
nn::Network build_generator(const GanConfig& cfg, const data::Layout& layout, int cond_width, Rng& init_rng);

/// 2 x [dense, leaky_relu, dropout], dense(1), sigmoid on in_width + cond_width inputs.
nn::Network build_discriminator(const GanConfig& cfg, int in_width, int cond_width, Rng& init_rng);

/// Checks the schema against the preset (SchemaError): gan1d takes exactly
/// one continuous column; cgan2d one continuous column plus a condition;
/// discgan at most one continuous column and at most one condition.
void check_preset_schema(Preset preset, const data::TableSchema& schema);

/// Builds a fresh model. `data` (encoded with `transforms`) supplies the
/// condition marginal. Parameters are initialized from streams derived from
/// cfg.seed.
GanModel make_model(const GanConfig& cfg, const data::TableSchema& schema, const data::TransformSet& transforms,
                    const data::EncodedMatrix& data);

/// Encoded rows split into generator-space features and the condition
/// one-hot (zero columns for unconditional models).
struct SplitRows {
  Matrix features;
  Matrix condition;
};

SplitRows split_condition(const GanModel& model, const data::EncodedMatrix& m);
data::EncodedMatrix join_condition(const GanModel& model, const Matrix& features, const Matrix& condition);

/// Column-concatenation [a, b].
Matrix hcat(const Matrix& a, const Matrix& b);

}  // namespace discgan::gan
