#pragma once

#include <span>
#include <string>
#include <vector>

#include "discgan/data/schema.hpp"
#include "discgan/data/table.hpp"

namespace discgan::eval {

/// Upper-tail probability of the chi-squared distribution with `dof`
/// degrees of freedom, Q(dof/2, stat/2).
double chi2_pvalue(double stat, int dof);

/// How the goodness-of-fit statistic is built for one discrete column.
///   counts:      observed generated counts against real proportions scaled
///                to the generated total (Pearson on counts).
///   frequencies: observed generated proportions against real proportions
///                (the construction of the SDV CSTest metric). The statistic
///                does not grow with sample size.
enum class CsMode { counts, frequencies };

struct CsColumn {
  std::string column;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Categories are the union of both samples. A category absent from the
/// real sample but present in the generated one gets expected count 0.5;
/// categories absent from both are dropped. A single category gives p = 1.
CsColumn cs_column(std::string column, std::span<const std::string> real, std::span<const std::string> gen,
                   CsMode mode = CsMode::counts);

std::vector<CsColumn> cs_columns(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema,
                                 CsMode mode = CsMode::counts);

/// Mean p-value over the schema's discrete columns; ArgumentError if there
/// are none.
double cs_test(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema,
               CsMode mode = CsMode::counts);

}  // namespace discgan::eval
