#pragma once

#include <string>
#include <vector>

#include "tabmeta/error.hpp"

namespace tabmeta {

enum class TaskKind { Classification, Regression };

inline const char* task_name(TaskKind t) {
  return t == TaskKind::Classification ? "classification" : "regression";
}

TaskKind task_from_string(const std::string& s);

enum class ColumnKind { Numerical, Categorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Numerical;
};

// Describes one tabular task: which columns exist, which one is the label,
// and whether the task is classification or regression.
struct DatasetSchema {
  std::string name;
  TaskKind task = TaskKind::Classification;
  std::vector<ColumnSpec> columns;  // includes the label column
  std::string label_column;
  int class_count = 1;  // 1 for regression, >= 2 for classification

  int label_index() const;
  void validate() const;
};

// Parses the JSON sidecar {name, task, label, columns:[{name, kind}]}.
// class_count may be given explicitly; for classification it defaults to 0
// meaning "infer from the data when encoding".
DatasetSchema schema_from_json(const std::string& json_text);
DatasetSchema load_schema(const std::string& path);

}  // namespace tabmeta
