#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "discgan/dist/config.hpp"
#include "discgan/nn/adam.hpp"

namespace discgan::gan {

/// gan1d: one continuous column, small generator with a sigmoid head.
/// cgan2d: the same networks with a condition one-hot appended to both inputs.
/// discgan: one optional continuous column plus discrete columns, batch-norm
/// generator with per-block output activations, optional condition.
enum class Preset { gan1d, cgan2d, discgan };

std::string_view to_string(Preset p);
Preset preset_from_string(std::string_view s);  // ConfigError naming "preset"

struct GanConfig {
  Preset preset = Preset::discgan;
  int noise_dim = 50;
  int batch_size = 32;
  std::int64_t steps = 1000;
  std::uint64_t seed = 0;
  std::int64_t eval_every = 1000;
  int hidden_width = 64;
  double leaky_alpha = 0.2;
  double dropout = 0.1;  // discriminator dropout rate
  nn::AdamConfig generator_optimizer;
  nn::AdamConfig discriminator_optimizer;
  dist::DistConfig distribution;
  // Draw training rows category-balanced on this discrete column.
  std::optional<std::string> balance_on;

  /// ConfigError naming the offending field.
  void validate() const;

  nlohmann::json to_json() const;
  /// Reads the GAN fields of `j`; absent fields keep their defaults and
  /// other keys are ignored. ConfigError names the field on a bad value.
  static GanConfig from_json(const nlohmann::json& j);

  bool operator==(const GanConfig&) const = default;
};

}  // namespace discgan::gan
