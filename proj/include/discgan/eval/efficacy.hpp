#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "discgan/data/schema.hpp"
#include "discgan/data/table.hpp"
#include "discgan/eval/mlp.hpp"
#include "discgan/eval/tree.hpp"

namespace discgan::eval {

enum class Classifier { tree, mlp };

std::string_view to_string(Classifier c);
Classifier classifier_from_string(std::string_view s);

struct EfficacyOptions {
  TreeOptions tree;
  MlpOptions mlp;
};

struct ClassCount {
  std::string label;
  int support = 0;  // test rows with this label
  int correct = 0;
};

struct EfficacyResult {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassCount> classes;  // sorted by label
  int unseen_test_rows = 0;         // test labels absent from training
  int n_train = 0;
  int n_test = 0;
};

/// Trains the classifier on `train` and scores it on `test`. Features are
/// all schema columns except the target, encoded with transforms fitted on
/// the training table (constant columns allowed, unseen test categories
/// become all-zero blocks). Training rows are put in a canonical order
/// first, so the result does not depend on row order. Test rows whose label
/// never occurs in training count as misclassified.
EfficacyResult ml_efficacy(const data::RawTable& train, const data::RawTable& test, const data::TableSchema& schema,
                           std::string_view target, Classifier kind, const EfficacyOptions& options = {});

}  // namespace discgan::eval
