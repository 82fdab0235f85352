#include "discgan/eval/tree.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "discgan/errors.hpp"

namespace discgan::eval {

namespace {

int majority(const std::vector<int>& counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

// Sum of squared class counts; Gini(n) = 1 - sq / n^2, so the weighted
// impurity n * Gini = n - sq / n.
double weighted_gini(const std::vector<int>& counts, double n) {
  if (n == 0.0) return 0.0;
  double sq = 0.0;
  for (int c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
  return n - sq / n;
}

struct Builder {
  const Matrix& x;
  std::span<const int> y;
  int n_classes;
  int max_depth;
  TreeModel model;

  int grow(std::vector<std::size_t>& rows, int depth) {
    std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
    for (auto r : rows) ++counts[static_cast<std::size_t>(y[r])];
    const int node = static_cast<int>(model.nodes.size());
    model.nodes.push_back({});
    model.nodes[static_cast<std::size_t>(node)].label = majority(counts);

    const bool pure = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;
    if (depth >= max_depth || pure || rows.size() < 2) return node;

    const double n = static_cast<double>(rows.size());
    double best = std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order(rows);
    for (int f = 0; f < x.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = x(static_cast<Eigen::Index>(a), f);
        const double vb = x(static_cast<Eigen::Index>(b), f);
        return va < vb || (va == vb && a < b);
      });
      std::vector<int> left(static_cast<std::size_t>(n_classes), 0);
      std::vector<int> right = counts;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const int label = y[order[i]];
        ++left[static_cast<std::size_t>(label)];
        --right[static_cast<std::size_t>(label)];
        const double v = x(static_cast<Eigen::Index>(order[i]), f);
        const double next = x(static_cast<Eigen::Index>(order[i + 1]), f);
        if (!(v < next)) continue;
        const double nl = static_cast<double>(i + 1);
        const double impurity = weighted_gini(left, nl) + weighted_gini(right, n - nl);
        if (impurity < best) {
          best = impurity;
          best_feature = f;
          best_threshold = v + (next - v) / 2.0;
          // Adjacent doubles: the midpoint may round up onto `next`.
          if (!(best_threshold < next)) best_threshold = v;
        }
      }
    }
    if (best_feature < 0) return node;

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (auto r : rows) {
      (x(static_cast<Eigen::Index>(r), best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(left_rows, depth + 1);
    const int r = grow(right_rows, depth + 1);
    auto& nd = model.nodes[static_cast<std::size_t>(node)];
    nd.feature = best_feature;
    nd.threshold = best_threshold;
    nd.left = l;
    nd.right = r;
    return node;
  }
};

}  // namespace

int TreeModel::depth() const {
  std::function<int(int)> walk = [&](int i) -> int {
    const auto& nd = nodes[static_cast<std::size_t>(i)];
    if (nd.feature < 0) return 0;
    return 1 + std::max(walk(nd.left), walk(nd.right));
  };
  return nodes.empty() ? 0 : walk(0);
}

TreeModel fit_decision_tree(const Matrix& x, std::span<const int> y, int n_classes, const TreeOptions& options) {
  if (x.rows() == 0 || y.empty()) throw ArgumentError("decision tree needs training rows");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw DimensionError("decision tree: row and label counts differ");
  if (n_classes < 1) throw ArgumentError("decision tree needs at least one class");
  if (options.max_depth < 1) throw ArgumentError("decision tree max_depth must be positive");
  for (int label : y) {
    if (label < 0 || label >= n_classes) throw ArgumentError("decision tree label out of range");
  }
  Builder b{x, y, n_classes, options.max_depth, {}};
  b.model.n_classes = n_classes;
  b.model.n_features = static_cast<int>(x.cols());
  std::vector<std::size_t> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  b.grow(rows, 0);
  return std::move(b.model);
}

std::vector<int> predict_tree(const TreeModel& model, const Matrix& x) {
  if (x.cols() != model.n_features) throw DimensionError("decision tree: feature count differs from training");
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    int i = 0;
    while (model.nodes[static_cast<std::size_t>(i)].feature >= 0) {
      const auto& nd = model.nodes[static_cast<std::size_t>(i)];
      i = x(r, nd.feature) <= nd.threshold ? nd.left : nd.right;
    }
    out[static_cast<std::size_t>(r)] = model.nodes[static_cast<std::size_t>(i)].label;
  }
  return out;
}

}  // namespace discgan::eval
