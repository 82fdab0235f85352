#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "discgan/data/schema.hpp"

namespace discgan::data {

/// One typed column. Continuous columns use `values`, discrete columns use
/// `labels`; the other vector stays empty.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  std::vector<double> values;
  std::vector<std::string> labels;

  std::size_t size() const { return kind == ColumnKind::continuous ? values.size() : labels.size(); }
  bool operator==(const Column&) const = default;
};

/// Column-major table of typed cells in input row order.
class RawTable {
 public:
  RawTable() = default;

  void add_column(Column column);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  bool empty() const { return rows_ == 0; }
  const std::vector<Column>& columns() const { return columns_; }
  const Column* find(std::string_view name) const;
  const Column& column(std::string_view name) const;  // SchemaError if absent

  RawTable select_rows(std::span<const std::size_t> rows) const;

  bool operator==(const RawTable&) const = default;

 private:
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

/// Splits rows into (train, test) by a seeded shuffle; the first
/// round(fraction * rows) shuffled rows form the train part. Both parts are
/// non-empty or ArgumentError is thrown.
std::pair<RawTable, RawTable> split_table(const RawTable& table, double train_fraction, std::uint64_t seed);

}  // namespace discgan::data
