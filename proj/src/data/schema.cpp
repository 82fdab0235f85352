#include "discgan/data/schema.hpp"

#include <fstream>
#include <set>

#include "discgan/errors.hpp"

namespace discgan::data {

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::continuous ? "continuous" : "discrete";
}

std::string_view to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::feature:
      return "feature";
    case ColumnRole::condition:
      return "condition";
    case ColumnRole::target:
      return "target";
  }
  return "feature";
}

TableSchema::TableSchema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw SchemaError("schema declares no columns");
  std::set<std::string> seen;
  bool has_feature = false;
  for (const auto& c : columns_) {
    if (c.name.empty()) throw SchemaError("schema column with empty name");
    if (!seen.insert(c.name).second) throw SchemaError("duplicate column name '" + c.name + "'");
    if (c.role == ColumnRole::feature) has_feature = true;
    if (c.role == ColumnRole::condition && c.kind != ColumnKind::discrete) {
      throw SchemaError("condition column '" + c.name + "' must be discrete");
    }
  }
  if (!has_feature) throw SchemaError("schema needs at least one feature column");
}

const ColumnSpec* TableSchema::find(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const ColumnSpec& TableSchema::at(std::string_view name) const {
  const ColumnSpec* c = find(name);
  if (c == nullptr) throw SchemaError("schema has no column '" + std::string(name) + "'");
  return *c;
}

std::size_t TableSchema::count(ColumnKind kind) const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.kind == kind ? 1 : 0;
  return n;
}

std::vector<std::string> TableSchema::names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

std::vector<std::string> TableSchema::names(ColumnKind kind) const {
  std::vector<std::string> out;
  for (const auto& c : columns_) {
    if (c.kind == kind) out.push_back(c.name);
  }
  return out;
}

std::optional<std::string> TableSchema::condition_column() const {
  std::optional<std::string> found;
  for (const auto& c : columns_) {
    if (c.role != ColumnRole::condition) continue;
    if (found) throw SchemaError("at most one condition column is supported");
    found = c.name;
  }
  return found;
}

nlohmann::json TableSchema::to_json() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns_) {
    cols.push_back({{"name", c.name}, {"kind", to_string(c.kind)}, {"role", to_string(c.role)}});
  }
  return {{"columns", std::move(cols)}};
}

TableSchema TableSchema::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_array()) {
    throw SchemaError("schema must be an object with a 'columns' array");
  }
  std::vector<ColumnSpec> cols;
  for (const auto& c : j["columns"]) {
    ColumnSpec spec;
    if (!c.contains("name") || !c["name"].is_string()) throw SchemaError("schema column needs a string 'name'");
    spec.name = c["name"].get<std::string>();
    const std::string kind = c.value("kind", "");
    if (kind == "continuous") {
      spec.kind = ColumnKind::continuous;
    } else if (kind == "discrete") {
      spec.kind = ColumnKind::discrete;
    } else {
      throw SchemaError("column '" + spec.name + "': kind must be 'continuous' or 'discrete'");
    }
    const std::string role = c.value("role", "feature");
    if (role == "feature") {
      spec.role = ColumnRole::feature;
    } else if (role == "condition") {
      spec.role = ColumnRole::condition;
    } else if (role == "target") {
      spec.role = ColumnRole::target;
    } else {
      throw SchemaError("column '" + spec.name + "': role must be feature, condition or target");
    }
    cols.push_back(std::move(spec));
  }
  return TableSchema(std::move(cols));
}

TableSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open schema file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("schema file " + path.string() + " is not valid JSON: " + e.what());
  }
  return TableSchema::from_json(j);
}

}  // namespace discgan::data
