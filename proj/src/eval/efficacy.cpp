#include "discgan/eval/efficacy.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "discgan/data/transforms.hpp"
#include "discgan/errors.hpp"

namespace discgan::eval {

std::string_view to_string(Classifier c) { return c == Classifier::tree ? "tree" : "mlp"; }

Classifier classifier_from_string(std::string_view s) {
  if (s == "tree") return Classifier::tree;
  if (s == "mlp") return Classifier::mlp;
  throw ArgumentError("unknown classifier '" + std::string(s) + "' (expected tree or mlp)");
}

EfficacyResult ml_efficacy(const data::RawTable& train, const data::RawTable& test, const data::TableSchema& schema,
                           std::string_view target, Classifier kind, const EfficacyOptions& options) {
  const auto& target_spec = schema.at(target);
  if (target_spec.kind != data::ColumnKind::discrete) {
    throw ArgumentError("target '" + std::string(target) + "' must be a discrete column");
  }
  if (train.empty() || test.empty()) throw ArgumentError("ML efficacy needs non-empty train and test tables");

  std::vector<data::ColumnSpec> feature_specs;
  for (const auto& c : schema.columns()) {
    if (c.name != target) feature_specs.push_back({c.name, c.kind, data::ColumnRole::feature});
  }
  if (feature_specs.empty()) throw ArgumentError("ML efficacy needs at least one feature besides the target");
  const data::TableSchema features(std::move(feature_specs));

  data::FitOptions fit;
  fit.allow_degenerate = true;
  const auto transforms = data::fit_transforms(train, features, fit);
  const Matrix x_train = data::encode(train, transforms, data::UnseenCategory::zero_block).values;
  const Matrix x_test = data::encode(test, transforms, data::UnseenCategory::zero_block).values;

  const auto& train_labels = train.column(target).labels;
  const auto& test_labels = test.column(target).labels;
  std::vector<std::string> vocab(train_labels.begin(), train_labels.end());
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  auto label_index = [&](const std::string& s) -> int {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), s);
    return it != vocab.end() && *it == s ? static_cast<int>(it - vocab.begin()) : -1;
  };

  // Canonical training order: lexicographic on (features, label).
  std::vector<int> y_raw(train_labels.size());
  for (std::size_t i = 0; i < y_raw.size(); ++i) y_raw[i] = label_index(train_labels[i]);
  std::vector<std::size_t> order(y_raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (Eigen::Index c = 0; c < x_train.cols(); ++c) {
      const double va = x_train(static_cast<Eigen::Index>(a), c);
      const double vb = x_train(static_cast<Eigen::Index>(b), c);
      if (va != vb) return va < vb;
    }
    return y_raw[a] < y_raw[b];
  });
  Matrix x(x_train.rows(), x_train.cols());
  std::vector<int> y(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = x_train.row(static_cast<Eigen::Index>(order[i]));
    y[i] = y_raw[order[i]];
  }

  const int k = static_cast<int>(vocab.size());
  std::vector<int> predicted;
  if (kind == Classifier::tree) {
    predicted = predict_tree(fit_decision_tree(x, y, k, options.tree), x_test);
  } else {
    predicted = predict_mlp(fit_mlp_classifier(x, y, k, options.mlp), x_test);
  }

  EfficacyResult out;
  out.n_train = static_cast<int>(train.rows());
  out.n_test = static_cast<int>(test.rows());
  std::map<std::string, ClassCount> classes;
  std::map<std::string, int> predicted_count;
  int correct = 0;
  for (std::size_t i = 0; i < test_labels.size(); ++i) {
    const int truth = label_index(test_labels[i]);
    auto& cc = classes[test_labels[i]];
    cc.label = test_labels[i];
    ++cc.support;
    ++predicted_count[vocab[static_cast<std::size_t>(predicted[i])]];
    if (truth < 0) {
      ++out.unseen_test_rows;
    } else if (predicted[i] == truth) {
      ++cc.correct;
      ++correct;
    }
  }
  out.accuracy = static_cast<double>(correct) / static_cast<double>(test_labels.size());

  // Macro F1 over every label seen in training or test.
  for (const auto& v : vocab) classes.try_emplace(v, ClassCount{v, 0, 0});
  double f1_sum = 0.0;
  for (const auto& [label, cc] : classes) {
    const double tp = cc.correct;
    const auto pc = predicted_count.find(label);
    const double pred = pc == predicted_count.end() ? 0.0 : pc->second;
    const double denom = pred + cc.support;
    f1_sum += denom > 0.0 ? 2.0 * tp / denom : 0.0;
    out.classes.push_back(cc);
  }
  out.macro_f1 = f1_sum / static_cast<double>(classes.size());
  return out;
}

}  // namespace discgan::eval
