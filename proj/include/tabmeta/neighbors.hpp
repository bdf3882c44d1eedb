#pragma once

#include <optional>
#include <span>

#include "tabmeta/encode.hpp"
#include "tabmeta/metric.hpp"

namespace tabmeta {

struct NeighborEntry {
  int ref_index = 0;     // row id in the reference dataset
  double distance = 0.0;
  double label = 0.0;    // class index (classification) or standardized target
};

struct NeighborList {
  std::vector<NeighborEntry> entries;  // distances non-decreasing
};

// Exact top-K by full scan with partial selection. Ties break on ascending
// reference row index, so the result is invariant to the subset's order.
NeighborList query_topk(std::span<const double> query, const EncodedDataset& reference,
                        std::span<const int> subset, const MetricSpec& spec, int k,
                        std::optional<int> exclude = std::nullopt);

}  // namespace tabmeta
