#include "tabmeta/encode.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace tabmeta {

std::string label_text(const Cell& cell) {
  switch (cell.kind) {
    case Cell::Kind::Text:
      return cell.text;
    case Cell::Kind::Number: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", cell.number);
      // Trim the %.17g form for integral values: class codes read as "3", not "3.0000...".
      double intpart = 0.0;
      if (std::modf(cell.number, &intpart) == 0.0 && std::abs(cell.number) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", cell.number);
      }
      return buf;
    }
    case Cell::Kind::Absent:
      return "";
  }
  return "";
}

std::vector<std::string> collect_label_levels(const RawTable& rows) {
  const int li = rows.schema.label_index();
  std::vector<std::string> levels;
  std::unordered_map<std::string, int> seen;
  for (const auto& row : rows.rows) {
    const std::string text = label_text(row[li]);
    if (row[li].kind == Cell::Kind::Absent) {
      throw Error(ErrorCode::TypeMismatch, "missing label value in dataset '" + rows.schema.name + "'");
    }
    if (seen.emplace(text, static_cast<int>(levels.size())).second) levels.push_back(text);
  }
  return levels;
}

namespace {

EncodeStats fit_impl(const RawTable& rows, const std::vector<int>* subset,
                     const std::vector<std::string>& label_universe) {
  const std::size_t n = subset ? subset->size() : rows.row_count();
  if (n < 2) throw Error(ErrorCode::TooFewInstances, "need at least 2 rows to fit an encoder");
  const auto& schema = rows.schema;
  const int li = schema.label_index();

  EncodeStats stats;
  stats.numeric.resize(schema.columns.size());
  stats.categorical.resize(schema.columns.size());

  auto row_at = [&](std::size_t i) -> const std::vector<Cell>& {
    return rows.rows[subset ? static_cast<std::size_t>((*subset)[i]) : i];
  };

  stats.encoded_dim = 0;
  bool any_variance = false;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (static_cast<int>(c) == li) continue;
    if (schema.columns[c].kind == ColumnKind::Numerical) {
      double sum = 0.0, sumsq = 0.0;
      std::size_t present = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const Cell& cell = row_at(i)[c];
        if (cell.kind == Cell::Kind::Number) {
          sum += cell.number;
          sumsq += cell.number * cell.number;
          ++present;
        }
      }
      auto& col = stats.numeric[c];
      if (present > 0) {
        col.mean = sum / static_cast<double>(present);
        const double var = sumsq / static_cast<double>(present) - col.mean * col.mean;
        col.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
      }
      if (col.stddev > 0.0) any_variance = true;
      stats.encoded_dim += 1;
    } else {
      auto& col = stats.categorical[c];
      std::unordered_map<std::string, int> seen;
      for (std::size_t i = 0; i < n; ++i) {
        const Cell& cell = row_at(i)[c];
        const std::string text = cell.kind == Cell::Kind::Absent ? "" : cell.text;
        if (seen.emplace(text, static_cast<int>(col.levels.size())).second) {
          col.levels.push_back(text);
        }
      }
      if (col.levels.size() > 1) any_variance = true;
      stats.encoded_dim += static_cast<int>(col.levels.size());
    }
  }

  if (schema.task == TaskKind::Classification) {
    if (!label_universe.empty()) {
      stats.label_levels = label_universe;
    } else {
      std::unordered_map<std::string, int> seen;
      for (std::size_t i = 0; i < n; ++i) {
        const std::string text = label_text(row_at(i)[li]);
        if (seen.emplace(text, static_cast<int>(stats.label_levels.size())).second) {
          stats.label_levels.push_back(text);
        }
      }
    }
  } else {
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Cell& cell = row_at(i)[li];
      if (cell.kind != Cell::Kind::Number) {
        throw Error(ErrorCode::TypeMismatch, "regression target must be numeric");
      }
      sum += cell.number;
      sumsq += cell.number * cell.number;
    }
    stats.target_mean = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - stats.target_mean * stats.target_mean;
    stats.target_stddev = var > 0.0 ? std::sqrt(var) : 1.0;
  }

  stats.degenerate = !any_variance;
  return stats;
}

}  // namespace

EncodeStats fit_encoder(const RawTable& train_rows, const std::vector<std::string>& label_universe) {
  return fit_impl(train_rows, nullptr, label_universe);
}

EncodeStats fit_encoder_subset(const RawTable& rows, const std::vector<int>& row_indices,
                               const std::vector<std::string>& label_universe) {
  return fit_impl(rows, &row_indices, label_universe);
}

EncodedDataset encode(const RawTable& rows, const EncodeStats& stats) {
  const auto& schema = rows.schema;
  const int li = schema.label_index();
  const std::size_t n = rows.row_count();

  EncodedDataset out;
  out.task = schema.task;
  out.name = schema.name;
  out.stats = stats;
  out.X = RowMatrix::Zero(static_cast<Eigen::Index>(n), stats.encoded_dim);

  std::unordered_map<std::string, int> label_map;
  for (std::size_t i = 0; i < stats.label_levels.size(); ++i) {
    label_map.emplace(stats.label_levels[i], static_cast<int>(i));
  }
  out.class_count = schema.task == TaskKind::Classification
                        ? static_cast<int>(stats.label_levels.size())
                        : 1;

  std::vector<std::unordered_map<std::string, int>> level_maps(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    for (std::size_t l = 0; l < stats.categorical[c].levels.size(); ++l) {
      level_maps[c].emplace(stats.categorical[c].levels[l], static_cast<int>(l));
    }
  }

  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = rows.rows[r];
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      if (static_cast<int>(c) == li) continue;
      if (schema.columns[c].kind == ColumnKind::Numerical) {
        const auto& st = stats.numeric[c];
        double v = row[c].kind == Cell::Kind::Number ? row[c].number : st.mean;  // mean imputation
        out.X(r, col) = st.stddev > 0.0 ? (v - st.mean) / st.stddev : 0.0;
        col += 1;
      } else {
        const auto& levels = stats.categorical[c].levels;
        const std::string text = row[c].kind == Cell::Kind::Absent ? "" : row[c].text;
        auto it = level_maps[c].find(text);
        if (it != level_maps[c].end()) out.X(r, col + it->second) = 1.0;
        // unseen level: all-zero block
        col += static_cast<Eigen::Index>(levels.size());
      }
    }
    if (schema.task == TaskKind::Classification) {
      const std::string text = label_text(row[li]);
      auto it = label_map.find(text);
      if (it == label_map.end()) {
        throw Error(ErrorCode::TypeMismatch, "label '" + text + "' not present in the fitted label map");
      }
      out.labels.push_back(it->second);
    } else {
      if (row[li].kind != Cell::Kind::Number) {
        throw Error(ErrorCode::TypeMismatch, "regression target must be numeric");
      }
      out.targets.push_back((row[li].number - stats.target_mean) / stats.target_stddev);
    }
  }
  return out;
}

}  // namespace tabmeta
