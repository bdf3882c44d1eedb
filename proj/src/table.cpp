#include "tabmeta/table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tabmeta {

TaskKind task_from_string(const std::string& s) {
  if (s == "classification") return TaskKind::Classification;
  if (s == "regression") return TaskKind::Regression;
  throw Error(ErrorCode::ConfigError, "unknown task '" + s + "' (expected classification|regression)");
}

int DatasetSchema::label_index() const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == label_column) return static_cast<int>(i);
  }
  throw Error(ErrorCode::MissingColumn, "label column '" + label_column + "' not in schema");
}

void DatasetSchema::validate() const {
  if (columns.empty()) throw Error(ErrorCode::ConfigError, "schema '" + name + "' has no columns");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = i + 1; j < columns.size(); ++j) {
      if (columns[i].name == columns[j].name) {
        throw Error(ErrorCode::ConfigError, "duplicate column name '" + columns[i].name + "'");
      }
    }
  }
  label_index();  // throws MissingColumn if absent
  if (task == TaskKind::Regression && class_count != 1) {
    throw Error(ErrorCode::ConfigError, "regression schema must have class_count = 1");
  }
  // class_count 0 means "infer from data later".
  if (task == TaskKind::Classification && class_count == 1) {
    throw Error(ErrorCode::ConfigError, "classification schema needs class_count >= 2");
  }
}

DatasetSchema schema_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("schema JSON parse failure: ") + e.what());
  }
  DatasetSchema s;
  try {
    s.name = j.at("name").get<std::string>();
    s.task = task_from_string(j.at("task").get<std::string>());
    s.label_column = j.at("label").get<std::string>();
    for (const auto& col : j.at("columns")) {
      ColumnSpec c;
      c.name = col.at("name").get<std::string>();
      const std::string kind = col.at("kind").get<std::string>();
      if (kind == "numerical") {
        c.kind = ColumnKind::Numerical;
      } else if (kind == "categorical") {
        c.kind = ColumnKind::Categorical;
      } else {
        throw Error(ErrorCode::ConfigError, "column '" + c.name + "' has unknown kind '" + kind + "'");
      }
      s.columns.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("schema JSON missing field: ") + e.what());
  }
  s.class_count = s.task == TaskKind::Regression ? 1 : j.value("class_count", 0);
  s.validate();
  return s;
}

DatasetSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open schema file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return schema_from_json(buf.str());
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

RawTable parse_rows(std::istream& in, const DatasetSchema& schema, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyTable, origin + " has no header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // Strip a UTF-8 BOM if present.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const std::vector<std::string> header = split_csv_line(line);
  std::vector<int> schema_to_file(schema.columns.size(), -1);
  for (std::size_t s = 0; s < schema.columns.size(); ++s) {
    for (std::size_t f = 0; f < header.size(); ++f) {
      if (trim(header[f]) == schema.columns[s].name) {
        schema_to_file[s] = static_cast<int>(f);
        break;
      }
    }
    if (schema_to_file[s] < 0) {
      throw Error(ErrorCode::MissingColumn,
                  origin + " is missing declared column '" + schema.columns[s].name + "'");
    }
  }

  RawTable table;
  table.schema = schema;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    std::vector<Cell> row(schema.columns.size());
    for (std::size_t s = 0; s < schema.columns.size(); ++s) {
      const std::size_t f = static_cast<std::size_t>(schema_to_file[s]);
      const std::string value = f < fields.size() ? trim(fields[f]) : std::string();
      if (schema.columns[s].kind == ColumnKind::Numerical) {
        if (value.empty()) {
          row[s] = Cell::absent();
        } else {
          double v = 0.0;
          if (!parse_double(value, v)) {
            throw Error(ErrorCode::TypeMismatch,
                        origin + " line " + std::to_string(line_no) + ": column '" +
                            schema.columns[s].name + "' has non-numeric value '" + value + "'");
          }
          row[s] = Cell::num(v);
        }
      } else {
        row[s] = value.empty() ? Cell::absent() : Cell::str(value);
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw Error(ErrorCode::EmptyTable, origin + " has no data rows");
  return table;
}

}  // namespace

RawTable load_table(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return parse_rows(in, schema, path);
}

RawTable parse_table(const std::string& csv_text, const DatasetSchema& schema) {
  std::istringstream in(csv_text);
  return parse_rows(in, schema, "<memory>");
}

}  // namespace tabmeta
