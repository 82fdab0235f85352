#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "discgan/matrix.hpp"
#include "discgan/nn/network.hpp"

namespace discgan::eval {

struct MlpOptions {
  int hidden_width = 64;
  int epochs = 200;
  double lr = 1e-3;
  std::uint64_t seed = 0;
};

struct MlpModel {
  nn::Network net;  // dense(hidden) -> leaky_relu(0.01) -> dense(classes) logits
  int n_classes = 0;
};

/// One-hidden-layer classifier trained full-batch with softmax
/// cross-entropy and Adam (beta1 0.9). Labels are 0..n_classes-1.
MlpModel fit_mlp_classifier(const Matrix& x, std::span<const int> y, int n_classes, const MlpOptions& options = {});

/// Argmax of the logits, ties to the lowest class.
std::vector<int> predict_mlp(const MlpModel& model, const Matrix& x);

}  // namespace discgan::eval
