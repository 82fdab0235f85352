#pragma once

#include <cstddef>
#include <vector>

#include "discgan/matrix.hpp"
#include "discgan/nn/layer.hpp"
#include "discgan/rng.hpp"

namespace discgan::nn {

/// Parameters of a network as flat tensor lists. Dense layers own
/// (weight[fan_in x fan_out], bias[1 x fan_out]); batch-norm layers own
/// trainable (gamma, beta) and non-trainable (moving_mean, moving_var), all
/// stored as 1 x width rows.
struct ParamSet {
  std::vector<Matrix> trainable;
  std::vector<Matrix> non_trainable;
};

/// Gradients matching a ParamSet's trainable tensors one-for-one.
struct GradSet {
  std::vector<Matrix> tensors;

  static GradSet zeros_like(const ParamSet& params);
  bool same_shape(const GradSet& other) const;
  bool same_shape(const ParamSet& params) const;
  std::size_t size() const;  // scalar count
};

/// Where a layer's tensors live inside the ParamSet; -1 when it owns none.
struct LayerSlot {
  int in_width = 0;
  int out_width = 0;
  int trainable = -1;
  int non_trainable = -1;
};

class Network {
 public:
  Network() = default;

  /// Builds the chain and initializes parameters: dense weights Glorot-uniform,
  /// biases zero, gamma one, beta zero, moving_mean zero, moving_var one.
  Network(int input_width, std::vector<LayerSpec> layers, Rng& init_rng);

  /// Builds the chain with zero-filled dense weights (for loading checkpoints).
  Network(int input_width, std::vector<LayerSpec> layers);

  int input_width() const { return input_width_; }
  int output_width() const;
  const std::vector<LayerSpec>& layers() const { return layers_; }
  const LayerSlot& slot(std::size_t layer) const { return slots_.at(layer); }

  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }

  std::size_t trainable_count() const;
  std::size_t non_trainable_count() const;
  bool has_dropout() const;
  bool has_batch_norm() const;

  /// Checks that params() still matches the layer chain's shapes.
  void check_params() const;

 private:
  void build(int input_width, std::vector<LayerSpec> layers);

  int input_width_ = 0;
  std::vector<LayerSpec> layers_;
  std::vector<LayerSlot> slots_;
  ParamSet params_;
};

enum class Mode { train, infer };

struct LayerCache {
  Matrix input;
  Matrix output;
  Matrix aux;      // dropout mask or batch-norm normalized input
  RowVector mean;  // batch-norm batch statistics (train mode)
  RowVector var;
  RowVector inv_std;
};

struct ForwardCache {
  Mode mode = Mode::infer;
  int input_width = 0;
  std::vector<LayerCache> layers;
};

struct ForwardResult {
  Matrix output;
  ForwardCache cache;
};

/// Runs the network on a batch (one sample per row). In train mode dropout
/// draws masks from `rng` (required when a dropout layer with rate > 0
/// exists) and batch-norm normalizes with batch statistics; in infer mode
/// dropout is the identity and batch-norm uses the moving statistics.
/// Moving statistics are not modified; see update_moving_stats.
ForwardResult forward(const Network& net, const Matrix& batch, Mode mode, Rng* rng = nullptr);

/// Infer-mode output without retaining a cache.
Matrix predict(const Network& net, const Matrix& batch);

/// Gradients of the loss with respect to every trainable tensor, given the
/// loss gradient at the output. The loss gradient is expected to already
/// carry any 1/batch normalization. When `input_grad` is non-null it
/// receives the gradient with respect to the network input.
GradSet backward(const Network& net, const ForwardCache& cache, const Matrix& output_grad,
                 Matrix* input_grad = nullptr);

/// Folds the batch statistics of a train-mode forward into the batch-norm
/// moving averages: moving = momentum * moving + (1 - momentum) * batch.
void update_moving_stats(Network& net, const ForwardCache& cache);

}  // namespace discgan::nn
