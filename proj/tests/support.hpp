#pragma once

// Helpers shared by the unit and acceptance test binaries.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "discgan/data/schema.hpp"
#include "discgan/data/table.hpp"
#include "discgan/data/transforms.hpp"
#include "discgan/rng.hpp"

namespace discgan::testing {

struct RandomTable {
  data::TableSchema schema;
  data::RawTable table;
};

/// A table with 1-3 continuous and 1-3 discrete columns, 2-60 rows, values
/// spread over several magnitudes and labels that need CSV quoting.
inline RandomTable random_table(Rng& rng) {
  static const std::vector<std::string> pool = {"A", "B", "C", "x,y", "say \"hi\"", "Zeta", "0", "10", "9", "\xC3\xA9t\xC3\xA9"};
  const std::size_t rows = 2 + rng.index(59);
  const std::size_t n_cont = 1 + rng.index(3);
  const std::size_t n_disc = 1 + rng.index(3);
  std::vector<data::ColumnSpec> specs;
  data::RawTable table;
  for (std::size_t c = 0; c < n_cont; ++c) {
    data::Column col{"num" + std::to_string(c), data::ColumnKind::continuous, {}, {}};
    const double scale = std::pow(10.0, static_cast<double>(rng.index(9)) - 3.0);
    const double shift = scale * (rng.uniform() * 20.0 - 10.0);
    for (std::size_t r = 0; r < rows; ++r) col.values.push_back(shift + scale * rng.normal());
    if (col.values[0] == col.values[1]) col.values[1] += scale;
    specs.push_back({col.name, col.kind, data::ColumnRole::feature});
    table.add_column(std::move(col));
  }
  for (std::size_t c = 0; c < n_disc; ++c) {
    data::Column col{"cat" + std::to_string(c), data::ColumnKind::discrete, {}, {}};
    const std::size_t k = 1 + rng.index(5);
    std::vector<std::string> vocab = pool;
    for (std::size_t i = vocab.size() - 1; i > 0; --i) std::swap(vocab[i], vocab[rng.index(i + 1)]);
    vocab.resize(k);
    for (std::size_t r = 0; r < rows; ++r) col.labels.push_back(vocab[rng.index(k)]);
    specs.push_back({col.name, col.kind, data::ColumnRole::feature});
    table.add_column(std::move(col));
  }
  // Interleave column order so layouts are not always continuous-first.
  for (std::size_t i = specs.size() - 1; i > 0; --i) std::swap(specs[i], specs[rng.index(i + 1)]);
  return {data::TableSchema(std::move(specs)), std::move(table)};
}

/// Worst continuous error of `b` against `a`, relative to each column's
/// magnitude max(|min|, |max|), and whether discrete columns match exactly.
struct RoundTripError {
  double continuous = 0.0;
  bool discrete_exact = true;
};

inline RoundTripError compare_tables(const data::RawTable& a, const data::RawTable& b, const data::TableSchema& schema) {
  RoundTripError err;
  for (const auto& spec : schema.columns()) {
    const auto& ca = a.column(spec.name);
    const auto& cb = b.column(spec.name);
    if (spec.kind == data::ColumnKind::discrete) {
      err.discrete_exact = err.discrete_exact && ca.labels == cb.labels;
      continue;
    }
    if (ca.values.size() != cb.values.size()) {
      err.continuous = INFINITY;
      continue;
    }
    const auto [lo, hi] = std::minmax_element(ca.values.begin(), ca.values.end());
    const double mag = std::max(std::abs(*lo), std::abs(*hi));
    for (std::size_t i = 0; i < ca.values.size(); ++i) {
      err.continuous = std::max(err.continuous, std::abs(ca.values[i] - cb.values[i]) / mag);
    }
  }
  return err;
}

}  // namespace discgan::testing
