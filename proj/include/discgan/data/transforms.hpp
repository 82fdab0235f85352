#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "discgan/data/schema.hpp"
#include "discgan/data/table.hpp"
#include "discgan/matrix.hpp"

namespace discgan::data {

/// Continuous scaling. min_max maps into [0,1] and is what the sigmoid
/// output heads require; z_score is available for other experiments.
enum class Scaling { min_max, z_score };

/// A contiguous range of encoded channels belonging to one schema column.
struct Block {
  std::string column;
  ColumnKind kind = ColumnKind::continuous;
  int offset = 0;
  int width = 1;

  bool operator==(const Block&) const = default;
};

struct Layout {
  std::vector<Block> blocks;
  int width = 0;

  const Block* find(std::string_view column) const;
  const Block& at(std::string_view column) const;  // SchemaError if absent
  /// The layout with one block removed and later offsets shifted down.
  Layout without(std::string_view column) const;

  bool operator==(const Layout&) const = default;
};

struct ColumnTransform {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  double min = 0.0;
  double max = 1.0;
  double mean = 0.0;
  double sd = 1.0;
  std::vector<std::string> vocabulary;  // sorted, duplicate-free

  std::optional<std::size_t> index_of(std::string_view label) const;
  int width() const { return kind == ColumnKind::continuous ? 1 : static_cast<int>(vocabulary.size()); }

  bool operator==(const ColumnTransform&) const = default;
};

class TransformSet {
 public:
  TransformSet() = default;
  TransformSet(Scaling scaling, std::vector<ColumnTransform> columns);

  Scaling scaling() const { return scaling_; }
  const std::vector<ColumnTransform>& columns() const { return columns_; }
  const ColumnTransform& at(std::string_view name) const;
  const Layout& layout() const { return layout_; }

  nlohmann::json to_json() const;
  static TransformSet from_json(const nlohmann::json& j);

  bool operator==(const TransformSet&) const = default;

 private:
  Scaling scaling_ = Scaling::min_max;
  std::vector<ColumnTransform> columns_;
  Layout layout_;
};

/// Encoded table: one row per record, channels laid out per `layout`.
struct EncodedMatrix {
  Matrix values;
  Layout layout;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
};

struct FitOptions {
  Scaling scaling = Scaling::min_max;
  // Encode constant continuous columns as 0 instead of rejecting them.
  bool allow_degenerate = false;
};

/// Fits per-column transforms in schema order: observed min/max (and
/// mean/sd) for continuous columns, sorted distinct labels for discrete ones.
TransformSet fit_transforms(const RawTable& table, const TableSchema& schema, const FitOptions& options = {});

enum class UnseenCategory { error, zero_block };

/// Concatenates, in schema order, scaled continuous channels (clipped to
/// [0,1] under min_max) and one-hot blocks. Unseen categories raise
/// VocabularyError unless `unseen` is zero_block.
EncodedMatrix encode(const RawTable& table, const TransformSet& transforms,
                     UnseenCategory unseen = UnseenCategory::error);

/// Inverse of encode: continuous channels are clipped into [min,max] after
/// inverse scaling; one-hot blocks decode by argmax (ties to lowest index).
RawTable decode(const EncodedMatrix& m, const TransformSet& transforms);

/// True when every one-hot block of every row holds a single 1 and
/// continuous channels lie in [0,1].
bool satisfies_encoding_invariants(const EncodedMatrix& m);

}  // namespace discgan::data
