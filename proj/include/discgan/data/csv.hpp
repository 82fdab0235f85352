#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "discgan/data/schema.hpp"
#include "discgan/data/table.hpp"

namespace discgan::data {

/// RFC 4180 records: comma separated, double-quoted fields may contain
/// commas, quotes ("") and line breaks. CRLF and LF endings are accepted.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

/// Loads the schema's columns from a headered CSV. Extra columns are ignored.
/// Throws SchemaError listing every missing column, ParseError (with data row
/// index and column) for unparseable or empty cells, ArgumentError when the
/// file has no data rows.
RawTable load_csv(const std::filesystem::path& path, const TableSchema& schema);
RawTable read_csv(std::istream& in, const TableSchema& schema);

/// Writes the table with a header in column order. Continuous values use the
/// shortest representation that round-trips.
void write_csv(const RawTable& table, const std::filesystem::path& path);
void write_csv(const RawTable& table, std::ostream& out);

std::string format_double(double v);

}  // namespace discgan::data
