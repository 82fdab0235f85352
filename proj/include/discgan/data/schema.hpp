#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace discgan::data {

enum class ColumnKind { continuous, discrete };
enum class ColumnRole { feature, condition, target };

std::string_view to_string(ColumnKind kind);
std::string_view to_string(ColumnRole role);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  ColumnRole role = ColumnRole::feature;

  bool operator==(const ColumnSpec&) const = default;
};

/// Ordered column declarations. Names are unique and at least one column
/// has the feature role.
class TableSchema {
 public:
  TableSchema() = default;
  explicit TableSchema(std::vector<ColumnSpec> columns);

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }
  const ColumnSpec* find(std::string_view name) const;
  const ColumnSpec& at(std::string_view name) const;  // SchemaError if absent

  std::size_t count(ColumnKind kind) const;
  std::vector<std::string> names() const;
  std::vector<std::string> names(ColumnKind kind) const;
  std::optional<std::string> condition_column() const;  // SchemaError if more than one

  nlohmann::json to_json() const;
  static TableSchema from_json(const nlohmann::json& j);

  bool operator==(const TableSchema&) const = default;

 private:
  std::vector<ColumnSpec> columns_;
};

TableSchema load_schema(const std::filesystem::path& path);

}  // namespace discgan::data
