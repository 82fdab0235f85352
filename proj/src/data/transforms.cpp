#include "discgan/data/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "discgan/errors.hpp"

namespace discgan::data {

const Block* Layout::find(std::string_view column) const {
  for (const auto& b : blocks) {
    if (b.column == column) return &b;
  }
  return nullptr;
}

const Block& Layout::at(std::string_view column) const {
  const Block* b = find(column);
  if (b == nullptr) throw SchemaError("layout has no column '" + std::string(column) + "'");
  return *b;
}

Layout Layout::without(std::string_view column) const {
  Layout out;
  for (const auto& b : blocks) {
    if (b.column == column) continue;
    Block copy = b;
    copy.offset = out.width;
    out.width += b.width;
    out.blocks.push_back(std::move(copy));
  }
  return out;
}

std::optional<std::size_t> ColumnTransform::index_of(std::string_view label) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), label);
  if (it == vocabulary.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - vocabulary.begin());
}

TransformSet::TransformSet(Scaling scaling, std::vector<ColumnTransform> columns)
    : scaling_(scaling), columns_(std::move(columns)) {
  for (const auto& c : columns_) {
    if (c.kind == ColumnKind::discrete) {
      if (c.vocabulary.empty()) throw StateError("column '" + c.name + "' has an empty vocabulary");
      if (!std::is_sorted(c.vocabulary.begin(), c.vocabulary.end()) ||
          std::adjacent_find(c.vocabulary.begin(), c.vocabulary.end()) != c.vocabulary.end()) {
        throw StateError("column '" + c.name + "' vocabulary must be sorted and duplicate-free");
      }
    }
    layout_.blocks.push_back({c.name, c.kind, layout_.width, c.width()});
    layout_.width += c.width();
  }
}

const ColumnTransform& TransformSet::at(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return c;
  }
  throw SchemaError("no transform for column '" + std::string(name) + "'");
}

nlohmann::json TransformSet::to_json() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns_) {
    if (c.kind == ColumnKind::continuous) {
      cols.push_back({{"name", c.name},
                      {"kind", "continuous"},
                      {"min", c.min},
                      {"max", c.max},
                      {"mean", c.mean},
                      {"sd", c.sd}});
    } else {
      cols.push_back({{"name", c.name}, {"kind", "discrete"}, {"vocabulary", c.vocabulary}});
    }
  }
  return {{"scaling", scaling_ == Scaling::min_max ? "min_max" : "z_score"}, {"columns", std::move(cols)}};
}

TransformSet TransformSet::from_json(const nlohmann::json& j) {
  const std::string scaling = j.at("scaling").get<std::string>();
  std::vector<ColumnTransform> cols;
  for (const auto& c : j.at("columns")) {
    ColumnTransform t;
    t.name = c.at("name").get<std::string>();
    if (c.at("kind").get<std::string>() == "continuous") {
      t.kind = ColumnKind::continuous;
      t.min = c.at("min").get<double>();
      t.max = c.at("max").get<double>();
      t.mean = c.at("mean").get<double>();
      t.sd = c.at("sd").get<double>();
    } else {
      t.kind = ColumnKind::discrete;
      t.vocabulary = c.at("vocabulary").get<std::vector<std::string>>();
    }
    cols.push_back(std::move(t));
  }
  return TransformSet(scaling == "z_score" ? Scaling::z_score : Scaling::min_max, std::move(cols));
}

TransformSet fit_transforms(const RawTable& table, const TableSchema& schema, const FitOptions& options) {
  if (table.empty()) throw ArgumentError("cannot fit transforms on an empty table");
  std::vector<ColumnTransform> out;
  for (const auto& spec : schema.columns()) {
    const Column& col = table.column(spec.name);
    if (col.kind != spec.kind) throw SchemaError("column '" + spec.name + "' kind differs from schema");
    ColumnTransform t;
    t.name = spec.name;
    t.kind = spec.kind;
    if (spec.kind == ColumnKind::continuous) {
      const auto [lo, hi] = std::minmax_element(col.values.begin(), col.values.end());
      t.min = *lo;
      t.max = *hi;
      // Sorted summation keeps the fit independent of row order.
      std::vector<double> sorted = col.values;
      std::sort(sorted.begin(), sorted.end());
      double sum = 0.0;
      for (double v : sorted) sum += v;
      t.mean = sum / static_cast<double>(sorted.size());
      double ss = 0.0;
      for (double v : sorted) ss += (v - t.mean) * (v - t.mean);
      t.sd = std::sqrt(ss / static_cast<double>(sorted.size()));
      if (!(t.min < t.max)) {
        if (!options.allow_degenerate) {
          throw DegenerateColumnError("continuous column '" + spec.name + "' is constant (min = max = " +
                                      std::to_string(t.min) + ")");
        }
        t.max = t.min + 1.0;
        t.sd = 1.0;
      }
    } else {
      std::set<std::string> distinct(col.labels.begin(), col.labels.end());
      t.vocabulary.assign(distinct.begin(), distinct.end());
    }
    out.push_back(std::move(t));
  }
  return TransformSet(options.scaling, std::move(out));
}

EncodedMatrix encode(const RawTable& table, const TransformSet& transforms, UnseenCategory unseen) {
  EncodedMatrix m;
  m.layout = transforms.layout();
  m.values = Matrix::Zero(static_cast<Eigen::Index>(table.rows()), m.layout.width);
  for (std::size_t k = 0; k < transforms.columns().size(); ++k) {
    const ColumnTransform& t = transforms.columns()[k];
    const Block& block = m.layout.blocks[k];
    const Column& col = table.column(t.name);
    if (col.kind != t.kind) throw SchemaError("column '" + t.name + "' kind differs from transforms");
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      if (t.kind == ColumnKind::continuous) {
        const double x = col.values[r];
        if (transforms.scaling() == Scaling::min_max) {
          m.values(row, block.offset) = std::clamp((x - t.min) / (t.max - t.min), 0.0, 1.0);
        } else {
          m.values(row, block.offset) = (x - t.mean) / t.sd;
        }
      } else {
        const auto idx = t.index_of(col.labels[r]);
        if (!idx) {
          if (unseen == UnseenCategory::zero_block) continue;
          throw VocabularyError("value '" + col.labels[r] + "' of column '" + t.name + "' is not in the vocabulary");
        }
        m.values(row, block.offset + static_cast<Eigen::Index>(*idx)) = 1.0;
      }
    }
  }
  return m;
}

RawTable decode(const EncodedMatrix& m, const TransformSet& transforms) {
  if (!(m.layout == transforms.layout()) || m.values.cols() != m.layout.width) {
    throw StateError("encoded layout does not match the transforms");
  }
  RawTable table;
  for (std::size_t k = 0; k < transforms.columns().size(); ++k) {
    const ColumnTransform& t = transforms.columns()[k];
    const Block& block = m.layout.blocks[k];
    Column col{t.name, t.kind, {}, {}};
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
      if (t.kind == ColumnKind::continuous) {
        const double v = m.values(r, block.offset);
        if (transforms.scaling() == Scaling::min_max) {
          col.values.push_back(std::clamp(v * (t.max - t.min) + t.min, t.min, t.max));
        } else {
          col.values.push_back(v * t.sd + t.mean);
        }
      } else {
        Eigen::Index best = 0;
        const auto seg = m.values.row(r).segment(block.offset, block.width);
        for (Eigen::Index c = 1; c < block.width; ++c) {
          if (seg(c) > seg(best)) best = c;
        }
        col.labels.push_back(t.vocabulary[static_cast<std::size_t>(best)]);
      }
    }
    table.add_column(std::move(col));
  }
  return table;
}

bool satisfies_encoding_invariants(const EncodedMatrix& m) {
  for (const auto& b : m.layout.blocks) {
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
      const auto seg = m.values.row(r).segment(b.offset, b.width);
      if (b.kind == ColumnKind::continuous) {
        if (!(seg(0) >= 0.0 && seg(0) <= 1.0)) return false;
      } else {
        int ones = 0;
        for (Eigen::Index c = 0; c < b.width; ++c) {
          if (seg(c) == 1.0) {
            ++ones;
          } else if (seg(c) != 0.0) {
            return false;
          }
        }
        if (ones != 1) return false;
      }
    }
  }
  return true;
}

}  // namespace discgan::data
