#include "discgan/nn/network.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "discgan/errors.hpp"

namespace discgan::nn {

namespace {

double stable_sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& x) { return x.unaryExpr(&stable_sigmoid); }

void softmax_rows(Matrix& m, int offset, int width) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r).segment(offset, width);
    const double peak = row.maxCoeff();
    row = (row.array() - peak).exp().matrix();
    row /= row.sum();
  }
}

std::string layer_label(std::size_t i, const LayerSpec& spec) {
  return "layer " + std::to_string(i) + " (" + std::string(to_string(spec.kind)) + ")";
}

}  // namespace

GradSet GradSet::zeros_like(const ParamSet& params) {
  GradSet g;
  g.tensors.reserve(params.trainable.size());
  for (const auto& t : params.trainable) g.tensors.push_back(Matrix::Zero(t.rows(), t.cols()));
  return g;
}

bool GradSet::same_shape(const GradSet& other) const {
  if (tensors.size() != other.tensors.size()) return false;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (tensors[i].rows() != other.tensors[i].rows() || tensors[i].cols() != other.tensors[i].cols()) {
      return false;
    }
  }
  return true;
}

bool GradSet::same_shape(const ParamSet& params) const {
  if (tensors.size() != params.trainable.size()) return false;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (tensors[i].rows() != params.trainable[i].rows() ||
        tensors[i].cols() != params.trainable[i].cols()) {
      return false;
    }
  }
  return true;
}

std::size_t GradSet::size() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += static_cast<std::size_t>(t.size());
  return n;
}

Network::Network(int input_width, std::vector<LayerSpec> layers, Rng& init_rng) {
  build(input_width, std::move(layers));
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].kind != LayerKind::dense) continue;
    Matrix& w = params_.trainable[static_cast<std::size_t>(slots_[i].trainable)];
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = (2.0 * init_rng.uniform() - 1.0) * limit;
    }
  }
}

Network::Network(int input_width, std::vector<LayerSpec> layers) {
  build(input_width, std::move(layers));
}

void Network::build(int input_width, std::vector<LayerSpec> layers) {
  if (input_width < 1) throw ArgumentError("network input width must be positive");
  input_width_ = input_width;
  layers_ = std::move(layers);
  slots_.clear();
  params_ = {};

  int width = input_width;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& spec = layers_[i];
    spec.validate();
    LayerSlot slot;
    slot.in_width = width;
    switch (spec.kind) {
      case LayerKind::dense:
        slot.out_width = spec.width;
        slot.trainable = static_cast<int>(params_.trainable.size());
        params_.trainable.push_back(Matrix::Zero(width, spec.width));
        params_.trainable.push_back(Matrix::Zero(1, spec.width));
        break;
      case LayerKind::batch_norm:
        slot.out_width = width;
        slot.trainable = static_cast<int>(params_.trainable.size());
        params_.trainable.push_back(Matrix::Ones(1, width));
        params_.trainable.push_back(Matrix::Zero(1, width));
        slot.non_trainable = static_cast<int>(params_.non_trainable.size());
        params_.non_trainable.push_back(Matrix::Zero(1, width));
        params_.non_trainable.push_back(Matrix::Ones(1, width));
        break;
      case LayerKind::block_activation:
        if (spec.blocks.back().offset + spec.blocks.back().width != width) {
          throw DimensionError(layer_label(i, spec) + ": blocks cover " +
                               std::to_string(spec.blocks.back().offset + spec.blocks.back().width) +
                               " channels but input width is " + std::to_string(width));
        }
        slot.out_width = width;
        break;
      default:
        slot.out_width = width;
        break;
    }
    width = slot.out_width;
    slots_.push_back(slot);
  }
}

int Network::output_width() const { return slots_.empty() ? input_width_ : slots_.back().out_width; }

std::size_t Network::trainable_count() const {
  std::size_t n = 0;
  for (const auto& t : params_.trainable) n += static_cast<std::size_t>(t.size());
  return n;
}

std::size_t Network::non_trainable_count() const {
  std::size_t n = 0;
  for (const auto& t : params_.non_trainable) n += static_cast<std::size_t>(t.size());
  return n;
}

bool Network::has_dropout() const {
  for (const auto& l : layers_) {
    if (l.kind == LayerKind::dropout && l.rate > 0.0) return true;
  }
  return false;
}

bool Network::has_batch_norm() const {
  for (const auto& l : layers_) {
    if (l.kind == LayerKind::batch_norm) return true;
  }
  return false;
}

void Network::check_params() const {
  Network reference(input_width_, layers_);
  const auto& expect = reference.params();
  auto same = [](const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols()) return false;
    }
    return true;
  };
  if (!same(params_.trainable, expect.trainable) || !same(params_.non_trainable, expect.non_trainable)) {
    throw DimensionError("parameter shapes do not match the layer chain");
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].kind != LayerKind::batch_norm) continue;
    const auto& var = params_.non_trainable[static_cast<std::size_t>(slots_[i].non_trainable) + 1];
    if ((var.array() < 0.0).any()) throw StateError(layer_label(i, layers_[i]) + ": negative moving variance");
  }
}

ForwardResult forward(const Network& net, const Matrix& batch, Mode mode, Rng* rng) {
  if (batch.cols() != net.input_width()) {
    throw DimensionError("input has " + std::to_string(batch.cols()) + " columns, network expects " +
                         std::to_string(net.input_width()) + " (layer 0)");
  }
  if (batch.rows() < 1) throw DimensionError("empty batch (layer 0)");

  const auto& params = net.params();
  ForwardResult result;
  result.cache.mode = mode;
  result.cache.input_width = net.input_width();
  result.cache.layers.resize(net.layers().size());

  Matrix x = batch;
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const LayerSpec& spec = net.layers()[i];
    const LayerSlot& slot = net.slot(i);
    LayerCache& lc = result.cache.layers[i];
    if (x.cols() != slot.in_width) {
      throw DimensionError(layer_label(i, spec) + ": expected width " + std::to_string(slot.in_width) +
                           ", got " + std::to_string(x.cols()));
    }
    Matrix y;
    switch (spec.kind) {
      case LayerKind::dense: {
        const auto t = static_cast<std::size_t>(slot.trainable);
        y = x * params.trainable[t];
        y.rowwise() += params.trainable[t + 1].row(0);
        break;
      }
      case LayerKind::leaky_relu: {
        const double a = spec.alpha;
        y = x.unaryExpr([a](double v) { return v > 0.0 ? v : a * v; });
        break;
      }
      case LayerKind::sigmoid:
        y = sigmoid(x);
        break;
      case LayerKind::batch_norm: {
        const auto t = static_cast<std::size_t>(slot.trainable);
        const auto nt = static_cast<std::size_t>(slot.non_trainable);
        const auto& gamma = params.trainable[t];
        const auto& beta = params.trainable[t + 1];
        if (mode == Mode::train) {
          lc.mean = x.colwise().mean();
          Matrix centered = x.rowwise() - lc.mean;
          lc.var = centered.array().square().colwise().mean();
          lc.inv_std = (lc.var.array() + spec.epsilon).rsqrt();
          lc.aux = centered.array().rowwise() * lc.inv_std.array();
        } else {
          const auto& mm = params.non_trainable[nt];
          const auto& mv = params.non_trainable[nt + 1];
          lc.inv_std = (mv.row(0).array() + spec.epsilon).rsqrt();
          lc.aux = (x.rowwise() - mm.row(0)).array().rowwise() * lc.inv_std.array();
        }
        y = (lc.aux.array().rowwise() * gamma.row(0).array()).rowwise() + beta.row(0).array();
        break;
      }
      case LayerKind::dropout: {
        if (mode == Mode::infer || spec.rate == 0.0) {
          y = x;
          break;
        }
        if (rng == nullptr) throw ArgumentError(layer_label(i, spec) + ": train mode requires an rng");
        const double keep = 1.0 - spec.rate;
        lc.aux.resize(x.rows(), x.cols());
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
          for (Eigen::Index c = 0; c < x.cols(); ++c) {
            lc.aux(r, c) = rng->uniform() < spec.rate ? 0.0 : 1.0 / keep;
          }
        }
        y = x.cwiseProduct(lc.aux);
        break;
      }
      case LayerKind::block_activation: {
        y = x;
        for (const auto& b : spec.blocks) {
          if (b.fn == BlockFn::sigmoid) {
            y.middleCols(b.offset, b.width) = x.middleCols(b.offset, b.width).unaryExpr(&stable_sigmoid);
          } else {
            softmax_rows(y, b.offset, b.width);
          }
        }
        break;
      }
    }
    lc.input = std::move(x);
    lc.output = y;
    x = std::move(y);
  }
  result.output = std::move(x);
  return result;
}

Matrix predict(const Network& net, const Matrix& batch) {
  return forward(net, batch, Mode::infer).output;
}

GradSet backward(const Network& net, const ForwardCache& cache, const Matrix& output_grad,
                 Matrix* input_grad) {
  if (cache.mode != Mode::train) throw StateError("backward requires a train-mode forward cache");
  if (cache.layers.size() != net.layers().size() || cache.input_width != net.input_width()) {
    throw StateError("forward cache does not belong to this network");
  }
  const auto& params = net.params();
  GradSet grads = GradSet::zeros_like(params);

  const std::size_t n_layers = net.layers().size();
  const Eigen::Index rows = n_layers ? cache.layers.back().output.rows() : output_grad.rows();
  if (output_grad.rows() != rows || output_grad.cols() != net.output_width()) {
    throw DimensionError("output gradient shape does not match network output (layer " +
                         std::to_string(n_layers ? n_layers - 1 : 0) + ")");
  }

  Matrix g = output_grad;
  for (std::size_t k = n_layers; k-- > 0;) {
    const LayerSpec& spec = net.layers()[k];
    const LayerSlot& slot = net.slot(k);
    const LayerCache& lc = cache.layers[k];
    if (lc.input.cols() != slot.in_width || lc.output.cols() != slot.out_width) {
      throw StateError("forward cache does not belong to this network (" + layer_label(k, spec) + ")");
    }
    switch (spec.kind) {
      case LayerKind::dense: {
        const auto t = static_cast<std::size_t>(slot.trainable);
        grads.tensors[t].noalias() = lc.input.transpose() * g;
        grads.tensors[t + 1] = g.colwise().sum();
        Matrix gx = g * params.trainable[t].transpose();
        g = std::move(gx);
        break;
      }
      case LayerKind::leaky_relu: {
        const double a = spec.alpha;
        g = g.cwiseProduct(lc.input.unaryExpr([a](double v) { return v > 0.0 ? 1.0 : a; }));
        break;
      }
      case LayerKind::sigmoid:
        g = g.array() * lc.output.array() * (1.0 - lc.output.array());
        break;
      case LayerKind::batch_norm: {
        const auto t = static_cast<std::size_t>(slot.trainable);
        const auto& gamma = params.trainable[t];
        const auto& xhat = lc.aux;
        grads.tensors[t] = (g.array() * xhat.array()).colwise().sum();
        grads.tensors[t + 1] = g.colwise().sum();
        const double n = static_cast<double>(g.rows());
        Matrix dxhat = g.array().rowwise() * gamma.row(0).array();
        RowVector sum_d = dxhat.colwise().sum();
        RowVector sum_dx = (dxhat.array() * xhat.array()).colwise().sum();
        Matrix gx = (n * dxhat.array() - (xhat.array().rowwise() * sum_dx.array())).rowwise() - sum_d.array();
        gx = gx.array().rowwise() * (lc.inv_std.array() / n);
        g = std::move(gx);
        break;
      }
      case LayerKind::dropout:
        if (lc.aux.size() != 0) g = g.cwiseProduct(lc.aux);
        break;
      case LayerKind::block_activation: {
        Matrix gx = g;
        for (const auto& b : spec.blocks) {
          auto y = lc.output.middleCols(b.offset, b.width);
          auto gy = g.middleCols(b.offset, b.width);
          if (b.fn == BlockFn::sigmoid) {
            gx.middleCols(b.offset, b.width) = gy.array() * y.array() * (1.0 - y.array());
          } else {
            for (Eigen::Index r = 0; r < g.rows(); ++r) {
              const double dot = gy.row(r).dot(y.row(r));
              gx.row(r).segment(b.offset, b.width) = y.row(r).array() * (gy.row(r).array() - dot);
            }
          }
        }
        g = std::move(gx);
        break;
      }
    }
  }
  if (input_grad != nullptr) *input_grad = std::move(g);
  return grads;
}

void update_moving_stats(Network& net, const ForwardCache& cache) {
  if (cache.mode != Mode::train) return;
  if (cache.layers.size() != net.layers().size()) throw StateError("forward cache does not belong to this network");
  auto& params = net.params();
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const LayerSpec& spec = net.layers()[i];
    if (spec.kind != LayerKind::batch_norm) continue;
    const auto nt = static_cast<std::size_t>(net.slot(i).non_trainable);
    const LayerCache& lc = cache.layers[i];
    const double m = spec.momentum;
    params.non_trainable[nt].row(0) = m * params.non_trainable[nt].row(0) + (1.0 - m) * lc.mean;
    params.non_trainable[nt + 1].row(0) = m * params.non_trainable[nt + 1].row(0) + (1.0 - m) * lc.var;
  }
}

}  // namespace discgan::nn
