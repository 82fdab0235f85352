#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace discgan::nn {

enum class LayerKind { dense, leaky_relu, sigmoid, batch_norm, dropout, block_activation };

std::string_view to_string(LayerKind kind);
LayerKind layer_kind_from_string(std::string_view name);

enum class BlockFn { sigmoid, softmax };

/// One contiguous slice of a block_activation layer's channels.
struct OutputBlock {
  int offset = 0;
  int width = 1;
  BlockFn fn = BlockFn::sigmoid;

  bool operator==(const OutputBlock&) const = default;
};

/// Declarative description of one layer. Only the field that belongs to the
/// layer's kind is meaningful; the factory functions set exactly that field.
struct LayerSpec {
  LayerKind kind = LayerKind::dense;
  int width = 0;            // dense output width
  double alpha = 0.0;       // leaky_relu negative slope
  double rate = 0.0;        // dropout drop probability
  double momentum = 0.0;    // batch_norm moving-statistic decay
  double epsilon = 0.0;     // batch_norm variance guard
  std::vector<OutputBlock> blocks;  // block_activation layout

  static LayerSpec dense(int width);
  static LayerSpec leaky_relu(double alpha);
  static LayerSpec sigmoid();
  static LayerSpec batch_norm(double momentum = 0.99, double epsilon = 1e-5);
  static LayerSpec dropout(double rate);
  static LayerSpec block_activation(std::vector<OutputBlock> blocks);

  /// Throws ArgumentError when fields outside the kind are set or values are
  /// out of range.
  void validate() const;

  bool operator==(const LayerSpec&) const = default;
};

}  // namespace discgan::nn
