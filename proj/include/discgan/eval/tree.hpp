#pragma once

#include <span>
#include <vector>

#include "discgan/matrix.hpp"

namespace discgan::eval {

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;
  int left = -1;  // x[feature] <= threshold
  int right = -1;
  int label = 0;  // majority label of the node's training rows
};

struct TreeModel {
  int n_classes = 0;
  int n_features = 0;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int depth() const;
};

struct TreeOptions {
  int max_depth = 8;
};

/// CART classifier on Gini impurity. Every feature (in index order) and
/// every midpoint between consecutive distinct values is tried; the first
/// split with the lowest weighted child impurity wins, even when it does not
/// lower the impurity (XOR-type data needs such splits). Growth stops at
/// max_depth, at pure nodes, at nodes with fewer than 2 rows, or when no
/// feature varies. Labels are 0..n_classes-1.
TreeModel fit_decision_tree(const Matrix& x, std::span<const int> y, int n_classes, const TreeOptions& options = {});

std::vector<int> predict_tree(const TreeModel& model, const Matrix& x);

}  // namespace discgan::eval
