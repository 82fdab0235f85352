#include "discgan/eval/mlp.hpp"

#include "discgan/errors.hpp"
#include "discgan/nn/adam.hpp"
#include "discgan/nn/loss.hpp"

namespace discgan::eval {

MlpModel fit_mlp_classifier(const Matrix& x, std::span<const int> y, int n_classes, const MlpOptions& options) {
  if (x.rows() < 2) throw ArgumentError("MLP classifier needs at least 2 training rows");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw DimensionError("MLP classifier: row and label counts differ");
  if (n_classes < 1) throw ArgumentError("MLP classifier needs at least one class");
  if (options.hidden_width < 1 || options.epochs < 0) throw ArgumentError("MLP classifier: invalid options");
  for (int label : y) {
    if (label < 0 || label >= n_classes) throw ArgumentError("MLP classifier label out of range");
  }
  Rng rng(options.seed);
  MlpModel model{nn::Network(static_cast<int>(x.cols()),
                             {nn::LayerSpec::dense(options.hidden_width), nn::LayerSpec::leaky_relu(0.01),
                              nn::LayerSpec::dense(n_classes)},
                             rng),
                 n_classes};
  auto adam = nn::AdamState::for_params(model.net.params(), {options.lr, 0.9, 0.999, 1e-8});
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const auto fwd = nn::forward(model.net, x, nn::Mode::train);
    const auto loss = nn::softmax_cross_entropy(fwd.output, y);
    const auto grads = nn::backward(model.net, fwd.cache, loss.grad);
    nn::adam_step(model.net.params(), grads, adam);
  }
  return model;
}

std::vector<int> predict_mlp(const MlpModel& model, const Matrix& x) {
  const Matrix logits = nn::predict(model.net, x);
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c) {
      if (logits(r, c) > logits(r, best)) best = c;
    }
    out[static_cast<std::size_t>(r)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace discgan::eval
