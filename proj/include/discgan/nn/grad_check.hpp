#pragma once

#include <cstdint>

#include "discgan/matrix.hpp"
#include "discgan/nn/network.hpp"

namespace discgan::nn {

struct GradCheckOptions {
  double eps = 1e-5;
  // Denominator floor of the relative error, so parameters whose true
  // gradient is zero (e.g. a dense bias feeding batch-norm) are compared
  // absolutely instead of dividing finite-difference noise by ~0.
  double floor = 1e-7;
  // Seeds both the dropout masks (re-drawn identically on every evaluation)
  // and the fixed regression target of the probe loss.
  std::uint64_t seed = 0;
};

/// Compares backward() against central finite differences of the probe loss
/// L = 0.5 * sum((f(x) - T)^2) / rows for every trainable scalar, and returns
/// the worst |analytic - numeric| / max(|analytic|, |numeric|, floor).
double grad_check(const Network& net, const Matrix& batch, const GradCheckOptions& options);

inline double grad_check(const Network& net, const Matrix& batch, double eps = 1e-5) {
  GradCheckOptions o;
  o.eps = eps;
  return grad_check(net, batch, o);
}

}  // namespace discgan::nn
