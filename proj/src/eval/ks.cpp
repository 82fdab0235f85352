#include "discgan/eval/ks.hpp"

#include <algorithm>
#include <cmath>

#include "discgan/errors.hpp"

namespace discgan::eval {

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ArgumentError("KS statistic needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  // Advance past every copy of the next smallest value so both ECDFs are
  // evaluated at the same point, then take the gap there.
  while (i < x.size() || j < y.size()) {
    const double t = (j == y.size() || (i < x.size() && x[i] <= y[j])) ? x[i] : y[j];
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

std::vector<KsColumn> ks_columns(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema) {
  std::vector<KsColumn> out;
  for (const auto& spec : schema.columns()) {
    if (spec.kind != data::ColumnKind::continuous) continue;
    const double d = ks_statistic(real.column(spec.name).values, gen.column(spec.name).values);
    out.push_back({spec.name, d, 1.0 - d});
  }
  return out;
}

double ks_test_value(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema) {
  const auto cols = ks_columns(real, gen, schema);
  if (cols.empty()) throw ArgumentError("KS test needs at least one continuous column");
  double sum = 0.0;
  for (const auto& c : cols) sum += c.score;
  return sum / static_cast<double>(cols.size());
}

}  // namespace discgan::eval
