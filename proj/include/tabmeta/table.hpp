#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tabmeta/schema.hpp"

namespace tabmeta {

// One parsed cell. Numerical columns hold a value or are absent (empty cell);
// categorical columns hold the raw text.
struct Cell {
  enum class Kind { Absent, Number, Text } kind = Kind::Absent;
  double number = 0.0;
  std::string text;

  static Cell absent() { return {}; }
  static Cell num(double v) { return {Kind::Number, v, {}}; }
  static Cell str(std::string s) { return {Kind::Text, 0.0, std::move(s)}; }
};

// Rows in schema column order (label column included at its schema position).
struct RawTable {
  DatasetSchema schema;
  std::vector<std::vector<Cell>> rows;

  std::size_t row_count() const { return rows.size(); }
};

// Splits one CSV line honoring double-quoted fields ("" escapes a quote).
std::vector<std::string> split_csv_line(const std::string& line);

// Loads a comma-separated UTF-8 file with a header row. The header must
// contain every schema column (order-insensitive); extra file columns are
// ignored. Numerical cells that fail to parse raise TypeMismatch; empty
// numerical cells are recorded as absent.
RawTable load_table(const std::string& path, const DatasetSchema& schema);

// Same contract, parsing from an in-memory string (used by tests).
RawTable parse_table(const std::string& csv_text, const DatasetSchema& schema);

}  // namespace tabmeta
