#include "discgan/data/table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "discgan/errors.hpp"
#include "discgan/rng.hpp"

namespace discgan::data {

void RawTable::add_column(Column column) {
  if (find(column.name) != nullptr) throw SchemaError("duplicate column '" + column.name + "'");
  if (!columns_.empty() && column.size() != rows_) {
    throw DimensionError("column '" + column.name + "' has " + std::to_string(column.size()) + " rows, table has " +
                         std::to_string(rows_));
  }
  rows_ = column.size();
  columns_.push_back(std::move(column));
}

const Column* RawTable::find(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const Column& RawTable::column(std::string_view name) const {
  const Column* c = find(name);
  if (c == nullptr) throw SchemaError("table has no column '" + std::string(name) + "'");
  return *c;
}

RawTable RawTable::select_rows(std::span<const std::size_t> rows) const {
  RawTable out;
  for (const auto& c : columns_) {
    Column copy{c.name, c.kind, {}, {}};
    for (std::size_t r : rows) {
      if (r >= rows_) throw ArgumentError("row index " + std::to_string(r) + " out of range");
      if (c.kind == ColumnKind::continuous) {
        copy.values.push_back(c.values[r]);
      } else {
        copy.labels.push_back(c.labels[r]);
      }
    }
    out.add_column(std::move(copy));
  }
  if (columns_.empty()) out.rows_ = 0;
  return out;
}

std::pair<RawTable, RawTable> split_table(const RawTable& table, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ArgumentError("train fraction must be in (0,1)");
  const std::size_t n = table.rows();
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n) {
    throw ArgumentError("split of " + std::to_string(n) + " rows leaves an empty partition");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return {table.select_rows(train), table.select_rows(test)};
}

}  // namespace discgan::data
