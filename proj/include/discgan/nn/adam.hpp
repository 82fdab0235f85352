#pragma once

#include <cstdint>
#include <vector>

#include "discgan/matrix.hpp"
#include "discgan/nn/network.hpp"

namespace discgan::nn {

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

struct AdamState {
  AdamConfig config;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::int64_t t = 0;

  static AdamState for_params(const ParamSet& params, AdamConfig config = {});
};

/// One bias-corrected Adam update of every trainable tensor. Throws
/// NumericError (leaving params and state untouched) if any gradient is not
/// finite, DimensionError on shape mismatch.
void adam_step(ParamSet& params, const GradSet& grads, AdamState& state);

}  // namespace discgan::nn
