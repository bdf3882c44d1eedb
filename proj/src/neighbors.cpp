#include "tabmeta/neighbors.hpp"

#include <algorithm>

namespace tabmeta {

NeighborList query_topk(std::span<const double> query, const EncodedDataset& reference,
                        std::span<const int> subset, const MetricSpec& spec, int k,
                        std::optional<int> exclude) {
  if (k < 1) throw Error(ErrorCode::ConfigError, "query_topk needs k >= 1");

  std::vector<std::pair<double, int>> scored;
  scored.reserve(subset.size());
  for (int idx : subset) {
    if (exclude && idx == *exclude) continue;
    const double* row = reference.X.row(idx).data();
    const double d = weighted_distance(query, {row, static_cast<std::size_t>(reference.dim())}, spec);
    scored.emplace_back(d, idx);
  }
  if (scored.empty()) {
    throw Error(ErrorCode::EmptyContext, "reference subset empty after exclusion");
  }

  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), scored.size());
  auto cmp = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), cmp);

  NeighborList out;
  out.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    NeighborEntry e;
    e.distance = scored[i].first;
    e.ref_index = scored[i].second;
    e.label = reference.task == TaskKind::Classification
                  ? static_cast<double>(reference.labels[e.ref_index])
                  : reference.targets[e.ref_index];
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace tabmeta
