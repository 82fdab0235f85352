#include "discgan/nn/layer.hpp"

#include <array>
#include <utility>

#include "discgan/errors.hpp"

namespace discgan::nn {

namespace {

constexpr std::array<std::pair<LayerKind, std::string_view>, 6> kKindNames{{
    {LayerKind::dense, "dense"},
    {LayerKind::leaky_relu, "leaky_relu"},
    {LayerKind::sigmoid, "sigmoid"},
    {LayerKind::batch_norm, "batch_norm"},
    {LayerKind::dropout, "dropout"},
    {LayerKind::block_activation, "block_activation"},
}};

}  // namespace

std::string_view to_string(LayerKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

LayerKind layer_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ArgumentError("unknown layer kind '" + std::string(name) + "'");
}

LayerSpec LayerSpec::dense(int width) {
  LayerSpec s;
  s.kind = LayerKind::dense;
  s.width = width;
  return s;
}

LayerSpec LayerSpec::leaky_relu(double alpha) {
  LayerSpec s;
  s.kind = LayerKind::leaky_relu;
  s.alpha = alpha;
  return s;
}

LayerSpec LayerSpec::sigmoid() {
  LayerSpec s;
  s.kind = LayerKind::sigmoid;
  return s;
}

LayerSpec LayerSpec::batch_norm(double momentum, double epsilon) {
  LayerSpec s;
  s.kind = LayerKind::batch_norm;
  s.momentum = momentum;
  s.epsilon = epsilon;
  return s;
}

LayerSpec LayerSpec::dropout(double rate) {
  LayerSpec s;
  s.kind = LayerKind::dropout;
  s.rate = rate;
  return s;
}

LayerSpec LayerSpec::block_activation(std::vector<OutputBlock> blocks) {
  LayerSpec s;
  s.kind = LayerKind::block_activation;
  s.blocks = std::move(blocks);
  return s;
}

void LayerSpec::validate() const {
  const std::string name(to_string(kind));
  const bool is_dense = kind == LayerKind::dense;
  const bool is_leaky = kind == LayerKind::leaky_relu;
  const bool is_bn = kind == LayerKind::batch_norm;
  const bool is_dropout = kind == LayerKind::dropout;
  const bool is_block = kind == LayerKind::block_activation;

  if (!is_dense && width != 0) throw ArgumentError(name + ": width is only valid on dense");
  if (!is_leaky && alpha != 0.0) throw ArgumentError(name + ": alpha is only valid on leaky_relu");
  if (!is_dropout && rate != 0.0) throw ArgumentError(name + ": rate is only valid on dropout");
  if (!is_bn && (momentum != 0.0 || epsilon != 0.0)) {
    throw ArgumentError(name + ": momentum/epsilon are only valid on batch_norm");
  }
  if (!is_block && !blocks.empty()) {
    throw ArgumentError(name + ": blocks are only valid on block_activation");
  }

  if (is_dense && width < 1) throw ArgumentError("dense: width must be positive");
  if (is_leaky && !(alpha > 0.0)) throw ArgumentError("leaky_relu: alpha must be positive");
  if (is_dropout && !(rate >= 0.0 && rate < 1.0)) throw ArgumentError("dropout: rate must be in [0,1)");
  if (is_bn) {
    if (!(momentum > 0.0 && momentum < 1.0)) throw ArgumentError("batch_norm: momentum must be in (0,1)");
    if (!(epsilon > 0.0)) throw ArgumentError("batch_norm: epsilon must be positive");
  }
  if (is_block) {
    if (blocks.empty()) throw ArgumentError("block_activation: needs at least one block");
    int expected = 0;
    for (const auto& b : blocks) {
      if (b.offset != expected || b.width < 1) {
        throw ArgumentError("block_activation: blocks must tile the channels contiguously");
      }
      expected += b.width;
    }
  }
}

}  // namespace discgan::nn
