#pragma once

#include <span>
#include <string>

namespace discgan::cli {

/// Sturges' rule, ceil(log2 n) + 1, but never fewer than 10 bins.
int sturges_bins(std::size_t n);

/// Overlaid density histogram of real (orange) and generated (blue)
/// values on shared bins spanning both samples. Bin count follows the real
/// sample size.
std::string histogram_svg(const std::string& title, std::span<const double> real, std::span<const double> gen);

/// Grouped bar chart of category proportions, categories sorted, real
/// (orange) beside generated (blue).
std::string bar_chart_svg(const std::string& title, std::span<const std::string> real,
                          std::span<const std::string> gen);

}  // namespace discgan::cli
