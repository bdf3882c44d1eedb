#include "tabmeta/mutual_info.hpp"

#include <algorithm>
#include <cmath>

namespace tabmeta {

std::vector<int> quantile_bins(std::span<const double> values, int bins) {
  const std::size_t n = values.size();
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  // Bin edges at the k/bins quantiles. Duplicate edges collapse bins, so a
  // heavily tied column lands in fewer effective bins; assignment stays a
  // pure function of the value, independent of row order.
  std::vector<double> edges;
  for (int k = 1; k < bins; ++k) {
    edges.push_back(sorted[static_cast<std::size_t>(k) * n / static_cast<std::size_t>(bins)]);
  }
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
  }
  return out;
}

double mutual_information(std::span<const double> column, const std::vector<int>& class_labels,
                          std::span<const double> targets, TaskKind task, const MiConfig& cfg) {
  const std::size_t n = column.size();
  if (n < 2) throw Error(ErrorCode::TooFewInstances, "mutual information needs at least 2 samples");
  if (cfg.bins < 2) throw Error(ErrorCode::ConfigError, "MiConfig.bins must be >= 2");

  const std::vector<int> xb = quantile_bins(column, cfg.bins);
  std::vector<int> yb;
  int y_card = 0;
  if (task == TaskKind::Classification) {
    if (class_labels.size() != n) throw Error(ErrorCode::LengthMismatch, "labels/column size mismatch");
    yb = class_labels;
    for (int y : yb) y_card = std::max(y_card, y + 1);
  } else {
    if (targets.size() != n) throw Error(ErrorCode::LengthMismatch, "targets/column size mismatch");
    yb = quantile_bins(targets, cfg.bins);
    y_card = cfg.bins;
  }

  const int x_card = cfg.bins;
  std::vector<double> joint(static_cast<std::size_t>(x_card) * y_card, 0.0);
  std::vector<double> px(x_card, 0.0), py(y_card, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    joint[static_cast<std::size_t>(xb[i]) * y_card + yb[i]] += inv_n;
    px[xb[i]] += inv_n;
    py[yb[i]] += inv_n;
  }

  double mi = 0.0;
  for (int x = 0; x < x_card; ++x) {
    for (int y = 0; y < y_card; ++y) {
      const double pxy = joint[static_cast<std::size_t>(x) * y_card + y];
      if (pxy > 0.0) mi += pxy * std::log(pxy / (px[x] * py[y]));
    }
  }
  return mi > 0.0 ? mi : 0.0;
}

std::vector<double> attribute_weights(const EncodedDataset& data, const std::vector<int>& rows,
                                      const MiConfig& cfg) {
  const std::size_t d = static_cast<std::size_t>(data.dim());
  std::vector<double> column(rows.size());
  std::vector<int> labels;
  std::vector<double> targets;
  if (data.task == TaskKind::Classification) {
    labels.reserve(rows.size());
    for (int r : rows) labels.push_back(data.labels[r]);
  } else {
    targets.reserve(rows.size());
    for (int r : rows) targets.push_back(data.targets[r]);
  }

  std::vector<double> weights(d, 0.0);
  double total = 0.0;
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      column[i] = data.X(rows[i], static_cast<Eigen::Index>(l));
    }
    weights[l] = mutual_information(column, labels, targets, data.task, cfg);
    total += weights[l];
  }
  if (total < 1e-12) {
    std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(d));
  } else {
    for (double& w : weights) w /= total;
  }
  return weights;
}

MetricSpec fit_metric(const EncodedDataset& data, const std::vector<int>& rows, DistanceKind kind,
                      const MiConfig& cfg) {
  MetricSpec spec;
  spec.kind = kind;
  spec.weights = attribute_weights(data, rows, cfg);
  return spec;
}

}  // namespace tabmeta
