#pragma once

#include <span>
#include <vector>

#include "tabmeta/encode.hpp"
#include "tabmeta/metric.hpp"

namespace tabmeta {

struct MiConfig {
  int bins = 16;
  int min_samples_per_bin = 1;
};

// Plug-in mutual information (nats) between one attribute column and the
// labels. Continuous variables are discretized into equal-frequency bins;
// classification labels are used as-is, regression targets are binned the
// same way. Constant columns give exactly 0.
double mutual_information(std::span<const double> column, const std::vector<int>& class_labels,
                          std::span<const double> targets, TaskKind task, const MiConfig& cfg = {});

// Per-attribute weights: MI of each column against the labels, normalized to
// sum to 1. Falls back to the uniform vector when total MI is ~0.
std::vector<double> attribute_weights(const EncodedDataset& data, const std::vector<int>& rows,
                                      const MiConfig& cfg = {});

// MetricSpec with MI weights fitted on the given reference rows.
MetricSpec fit_metric(const EncodedDataset& data, const std::vector<int>& rows, DistanceKind kind,
                      const MiConfig& cfg = {});

// Equal-frequency bin assignment used by the estimator (exposed for tests).
std::vector<int> quantile_bins(std::span<const double> values, int bins);

}  // namespace tabmeta
