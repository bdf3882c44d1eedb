#include "tabmeta/metarep.hpp"

#include <algorithm>

namespace tabmeta {

namespace {

// Interleave a neighbor list into [d_1, y_1, ..., d_K, y_K], padding short
// contexts by repeating the final pair.
std::vector<double> interleave(const NeighborList& neighbors, int k, bool constant_label) {
  std::vector<double> block(static_cast<std::size_t>(2) * k);
  const std::size_t found = neighbors.entries.size();
  for (int j = 0; j < k; ++j) {
    const NeighborEntry& e =
        neighbors.entries[std::min<std::size_t>(static_cast<std::size_t>(j), found - 1)];
    block[2 * j] = e.distance;
    block[2 * j + 1] = constant_label ? 1.0 : e.label;
  }
  return block;
}

}  // namespace

std::vector<double> class_meta_rep(std::span<const double> query, const EncodedDataset& dataset,
                                   std::span<const int> subset, int class_id,
                                   const MetricSpec& spec, int k, std::optional<int> exclude) {
  std::vector<int> members;
  for (int idx : subset) {
    if (dataset.labels[idx] == class_id) members.push_back(idx);
  }
  NeighborList nn = query_topk(query, dataset, members, spec, k, exclude);
  return interleave(nn, k, /*constant_label=*/true);
}

std::vector<double> regression_meta_rep(std::span<const double> query, const EncodedDataset& dataset,
                                        std::span<const int> subset, const MetricSpec& spec, int k,
                                        std::optional<int> exclude) {
  NeighborList nn = query_topk(query, dataset, subset, spec, k, exclude);
  return interleave(nn, k, /*constant_label=*/false);
}

MetaRepBuilder::MetaRepBuilder(const EncodedDataset& data, std::vector<int> subset,
                               std::vector<MetricSpec> specs, int k, bool normalize)
    : data_(data), subset_(std::move(subset)), specs_(std::move(specs)), k_(k), normalize_(normalize) {
  if (k_ < 1) throw Error(ErrorCode::ConfigError, "meta-representation needs K >= 1");
  if (specs_.empty()) throw Error(ErrorCode::ConfigError, "at least one distance kind required");
  std::sort(subset_.begin(), subset_.end());
  if (data_.task == TaskKind::Classification) {
    contexts_ = data_.class_count;
    class_subsets_.resize(contexts_);
    for (int idx : subset_) class_subsets_[data_.labels[idx]].push_back(idx);
  } else {
    contexts_ = 1;
    class_subsets_.push_back(subset_);
  }
}

MetaRep MetaRepBuilder::build(std::span<const double> query, std::optional<int> exclude) const {
  MetaRep rep;
  rep.k = k_;
  rep.contexts = contexts_;
  rep.kind_count = static_cast<int>(specs_.size());
  rep.values.resize(static_cast<std::size_t>(contexts_) * rep.block_len());

  const bool constant_label = data_.task == TaskKind::Classification;
  const int pair_len = 2 * k_;
  for (int c = 0; c < contexts_; ++c) {
    for (std::size_t j = 0; j < specs_.size(); ++j) {
      NeighborList nn = query_topk(query, data_, class_subsets_[c], specs_[j], k_, exclude);
      const std::vector<double> block = interleave(nn, k_, constant_label);
      std::copy(block.begin(), block.end(),
                rep.values.begin() + static_cast<std::size_t>(c) * rep.block_len() +
                    static_cast<std::size_t>(j) * pair_len);
    }
  }

  if (normalize_) {
    // Per kind, rescale distance slots by the largest distance this instance
    // saw across all of its contexts. Blocks ascend, so the block maximum is
    // its final distance slot.
    for (std::size_t j = 0; j < specs_.size(); ++j) {
      double max_d = 0.0;
      for (int c = 0; c < contexts_; ++c) {
        const std::size_t base =
            static_cast<std::size_t>(c) * rep.block_len() + j * pair_len;
        max_d = std::max(max_d, rep.values[base + static_cast<std::size_t>(2 * (k_ - 1))]);
      }
      if (max_d > 0.0) {
        for (int c = 0; c < contexts_; ++c) {
          const std::size_t base =
              static_cast<std::size_t>(c) * rep.block_len() + j * pair_len;
          for (int p = 0; p < k_; ++p) rep.values[base + static_cast<std::size_t>(2 * p)] /= max_d;
        }
      }
    }
  }
  return rep;
}

MetaRep MetaRepBuilder::build_for_row(int row, bool self_exclude) const {
  const double* ptr = data_.X.row(row).data();
  return build({ptr, static_cast<std::size_t>(data_.dim())},
               self_exclude ? std::optional<int>(row) : std::nullopt);
}

MetaRep full_meta_rep(std::span<const double> query, const EncodedDataset& dataset,
                      std::span<const int> subset, const std::vector<MetricSpec>& specs, int k,
                      std::optional<int> exclude, bool normalize) {
  MetaRepBuilder builder(dataset, std::vector<int>(subset.begin(), subset.end()), specs, k, normalize);
  return builder.build(query, exclude);
}

}  // namespace tabmeta
