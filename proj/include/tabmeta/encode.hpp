#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tabmeta/table.hpp"

namespace tabmeta {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Fitted per-column encoding state. Means/stddevs are population statistics
// over the fitting rows; categorical level maps are in first-appearance order.
struct EncodeStats {
  struct NumericColumn {
    double mean = 0.0;
    double stddev = 0.0;  // population; 0 marks a constant column
  };
  struct CategoricalColumn {
    std::vector<std::string> levels;  // first-appearance order; index = one-hot slot
  };

  // Parallel to the schema's non-label columns: exactly one of the entries
  // at each position is active, selected by the column kind.
  std::vector<NumericColumn> numeric;          // inactive slots left default
  std::vector<CategoricalColumn> categorical;  // inactive slots left empty

  // Label handling. Classification: distinct raw labels in first-appearance
  // order (numeric labels are canonicalized through their text form).
  std::vector<std::string> label_levels;
  // Regression: population statistics of the raw target over the fitting rows.
  double target_mean = 0.0;
  double target_stddev = 1.0;

  bool degenerate = false;  // all fitting rows identical, zero variance everywhere

  int encoded_dim = 0;  // total width after one-hot expansion

  std::string label_of(int class_index) const { return label_levels.at(class_index); }
};

// Fully numeric view of one dataset: standardized features, encoded labels.
struct EncodedDataset {
  RowMatrix X;                  // N x d
  std::vector<int> labels;      // classification: class id per row
  std::vector<double> targets;  // regression: standardized target per row
  TaskKind task = TaskKind::Classification;
  int class_count = 1;
  EncodeStats stats;
  std::string name;

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }

  double original_target(std::size_t row) const {
    return targets.at(row) * stats.target_stddev + stats.target_mean;
  }
  double destandardize(double y_std) const { return y_std * stats.target_stddev + stats.target_mean; }
};

// Canonical text form of a label cell; numeric labels print without trailing
// zeros so "3", "3.0" and 3.0 coincide.
std::string label_text(const Cell& cell);

// Fits encoding statistics on the given rows (the caller passes the training
// subset). Absent numerical cells are imputed with the column mean. If a
// label universe is supplied it overrides the observed first-appearance map
// (used to keep class ids stable when fitting on a subset of the data).
EncodeStats fit_encoder(const RawTable& train_rows,
                        const std::vector<std::string>& label_universe = {});

EncodeStats fit_encoder_subset(const RawTable& rows, const std::vector<int>& row_indices,
                               const std::vector<std::string>& label_universe = {});

// Applies fitted statistics to any rows from the same schema. Row order is
// preserved. Unseen categorical levels map to the all-zero block; unseen
// classification labels raise TypeMismatch.
EncodedDataset encode(const RawTable& rows, const EncodeStats& stats);

// Collects the label universe (first-appearance order over all rows).
std::vector<std::string> collect_label_levels(const RawTable& rows);

}  // namespace tabmeta
