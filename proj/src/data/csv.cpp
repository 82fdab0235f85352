#include "discgan/data/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

#include "discgan/errors.hpp"

namespace discgan::data {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !trim(field).empty()) {
          field += c;
        } else {
          field.clear();
          quoted = true;
          field_started = true;
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field += c;
        field_started = true;
        break;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", records.empty() ? 0 : records.size() - 1, "");
  if (!field.empty() || !record.empty()) end_record();
  return records;
}

RawTable read_csv(std::istream& in, const TableSchema& schema) {
  const auto records = parse_csv(in);
  if (records.empty()) throw ArgumentError("CSV has no header row");
  const auto& header = records.front();

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) position.emplace(std::string(trim(header[i])), i);

  std::string missing;
  for (const auto& c : schema.columns()) {
    if (!position.contains(c.name)) missing += (missing.empty() ? "" : ", ") + c.name;
  }
  if (!missing.empty()) throw SchemaError("CSV is missing schema column(s): " + missing);
  if (records.size() < 2) throw ArgumentError("CSV has no data rows");

  RawTable table;
  for (const auto& spec : schema.columns()) {
    Column col{spec.name, spec.kind, {}, {}};
    const std::size_t at = position.at(spec.name);
    for (std::size_t r = 1; r < records.size(); ++r) {
      const std::size_t row = r - 1;
      if (at >= records[r].size()) {
        throw ParseError("row " + std::to_string(row) + " has too few fields for column '" + spec.name + "'", row,
                         spec.name);
      }
      const std::string_view cell = trim(records[r][at]);
      if (cell.empty()) {
        throw ParseError("missing value at row " + std::to_string(row) + ", column '" + spec.name + "'", row,
                         spec.name);
      }
      if (spec.kind == ColumnKind::continuous) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
          throw ParseError("cannot parse '" + std::string(cell) + "' as a number at row " + std::to_string(row) +
                               ", column '" + spec.name + "'",
                           row, spec.name);
        }
        col.values.push_back(v);
      } else {
        col.labels.emplace_back(cell);
      }
    }
    table.add_column(std::move(col));
  }
  return table;
}

RawTable load_csv(const std::filesystem::path& path, const TableSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open CSV file " + path.string());
  return read_csv(in, schema);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_csv(const RawTable& table, std::ostream& out) {
  const auto& cols = table.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << quote_if_needed(cols[c].name);
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out << ',';
      if (cols[c].kind == ColumnKind::continuous) {
        out << format_double(cols[c].values[r]);
      } else {
        out << quote_if_needed(cols[c].labels[r]);
      }
    }
    out << '\n';
  }
}

void write_csv(const RawTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write CSV file " + path.string());
  write_csv(table, out);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace discgan::data
