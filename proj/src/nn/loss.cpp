#include "discgan/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discgan/errors.hpp"

namespace discgan::nn {

LossResult bce_loss(const Matrix& pred, const Matrix& labels) {
  if (pred.size() == 0) throw ArgumentError("bce_loss: empty input");
  if (pred.rows() != labels.rows() || pred.cols() != labels.cols()) {
    throw ArgumentError("bce_loss: prediction and label shapes differ");
  }
  const double n = static_cast<double>(pred.size());
  LossResult out;
  out.grad.resize(pred.rows(), pred.cols());
  // Neumaier-compensated sum, so a batch of equal terms averages exactly.
  double total = 0.0;
  double carry = 0.0;
  for (Eigen::Index r = 0; r < pred.rows(); ++r) {
    for (Eigen::Index c = 0; c < pred.cols(); ++c) {
      const double p = std::clamp(pred(r, c), kProbabilityClamp, 1.0 - kProbabilityClamp);
      const double y = labels(r, c);
      const double term = -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
      const double t = total + term;
      carry += std::abs(total) >= std::abs(term) ? (total - t) + term : (term - t) + total;
      total = t;
      out.grad(r, c) = (-y / p + (1.0 - y) / (1.0 - p)) / n;
    }
  }
  out.loss = (total + carry) / n;
  return out;
}

LossResult bce_loss(const Matrix& pred, double label) {
  return bce_loss(pred, Matrix::Constant(pred.rows(), pred.cols(), label));
}

LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels) {
  if (logits.rows() == 0) throw ArgumentError("softmax_cross_entropy: empty input");
  if (static_cast<std::size_t>(logits.rows()) != labels.size()) {
    throw ArgumentError("softmax_cross_entropy: label count differs from row count");
  }
  const double n = static_cast<double>(logits.rows());
  LossResult out;
  out.grad.resize(logits.rows(), logits.cols());
  double total = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int label = labels[static_cast<std::size_t>(r)];
    if (label < 0 || label >= logits.cols()) {
      throw ArgumentError("softmax_cross_entropy: label " + std::to_string(label) + " out of range");
    }
    const double peak = logits.row(r).maxCoeff();
    auto shifted = (logits.row(r).array() - peak).exp();
    const double z = shifted.sum();
    total += -(logits(r, label) - peak - std::log(z));
    out.grad.row(r) = (shifted / z).matrix();
    out.grad(r, label) -= 1.0;
  }
  out.grad /= n;
  out.loss = total / n;
  return out;
}

}  // namespace discgan::nn
