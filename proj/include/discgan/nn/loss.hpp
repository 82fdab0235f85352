#pragma once

#include <span>

#include "discgan/matrix.hpp"

namespace discgan::nn {

inline constexpr double kProbabilityClamp = 1e-7;

struct LossResult {
  double loss = 0.0;
  Matrix grad;  // d loss / d input, same shape as the input
};

/// Mean binary cross-entropy over all entries of `pred` against {0,1}
/// `labels` of the same shape. Probabilities are clamped to
/// [1e-7, 1 - 1e-7] before evaluation.
LossResult bce_loss(const Matrix& pred, const Matrix& labels);

/// Same as above with every label equal to `label`.
LossResult bce_loss(const Matrix& pred, double label);

/// Mean softmax cross-entropy of row-wise logits against class indices.
LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels);

}  // namespace discgan::nn
