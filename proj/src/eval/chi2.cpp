#include "discgan/eval/chi2.hpp"

#include <cmath>
#include <map>

#include <boost/math/special_functions/gamma.hpp>

#include "discgan/errors.hpp"

namespace discgan::eval {

double chi2_pvalue(double stat, int dof) {
  if (dof < 1) throw ArgumentError("chi-squared dof must be at least 1");
  if (std::isnan(stat) || stat < 0.0) throw ArgumentError("chi-squared statistic must be non-negative");
  if (stat == 0.0) return 1.0;
  if (std::isinf(stat)) return 0.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

CsColumn cs_column(std::string column, std::span<const std::string> real, std::span<const std::string> gen,
                   CsMode mode) {
  if (real.empty() || gen.empty()) throw ArgumentError("CS test on column '" + column + "' needs two non-empty samples");
  std::map<std::string, std::pair<double, double>> counts;  // real, generated
  for (const auto& s : real) counts[s].first += 1.0;
  for (const auto& s : gen) counts[s].second += 1.0;

  const double n_real = static_cast<double>(real.size());
  const double n_gen = static_cast<double>(gen.size());
  CsColumn out{std::move(column), 0.0, 0, 1.0};
  if (counts.size() < 2) return out;

  int kept = 0;
  for (const auto& [label, rc] : counts) {
    const auto [r, g] = rc;
    double expected = r * n_gen / n_real;  // exact when the sample sizes match
    if (r == 0.0) expected = 0.5;  // generated-only category
    double observed = g;
    if (mode == CsMode::frequencies) {
      expected /= n_gen;
      observed /= n_gen;
    }
    out.statistic += (observed - expected) * (observed - expected) / expected;
    ++kept;
  }
  out.dof = kept - 1;
  out.p_value = chi2_pvalue(out.statistic, out.dof);
  return out;
}

std::vector<CsColumn> cs_columns(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema,
                                 CsMode mode) {
  std::vector<CsColumn> out;
  for (const auto& spec : schema.columns()) {
    if (spec.kind != data::ColumnKind::discrete) continue;
    out.push_back(cs_column(spec.name, real.column(spec.name).labels, gen.column(spec.name).labels, mode));
  }
  return out;
}

double cs_test(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema, CsMode mode) {
  const auto cols = cs_columns(real, gen, schema, mode);
  if (cols.empty()) throw ArgumentError("CS test needs at least one discrete column");
  double sum = 0.0;
  for (const auto& c : cols) sum += c.p_value;
  return sum / static_cast<double>(cols.size());
}

}  // namespace discgan::eval
