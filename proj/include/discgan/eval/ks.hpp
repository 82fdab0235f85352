#pragma once

#include <span>
#include <string>
#include <vector>

#include "discgan/data/schema.hpp"
#include "discgan/data/table.hpp"

namespace discgan::eval {

/// Two-sample Kolmogorov-Smirnov D: the largest gap between the empirical
/// CDFs, evaluated exactly at every sample point by a sorted merge sweep.
double ks_statistic(std::span<const double> a, std::span<const double> b);

struct KsColumn {
  std::string column;
  double d = 0.0;
  double score = 0.0;  // 1 - d
};

std::vector<KsColumn> ks_columns(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema);

/// Mean of 1 - D over the schema's continuous columns; ArgumentError if
/// there are none.
double ks_test_value(const data::RawTable& real, const data::RawTable& gen, const data::TableSchema& schema);

}  // namespace discgan::eval
