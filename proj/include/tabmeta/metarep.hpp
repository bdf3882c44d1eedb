#pragma once

#include <optional>
#include <span>

#include "tabmeta/neighbors.hpp"

namespace tabmeta {

// Fixed-length neighborhood descriptor of one instance: per context (one per
// class for classification, a single one for regression) and per distance
// kind, K sorted neighbor distances interleaved with label slots.
struct MetaRep {
  std::vector<double> values;  // contexts x kinds x 2K, kinds contiguous within a context
  int k = 0;
  int contexts = 0;
  int kind_count = 0;

  int block_len() const { return kind_count * 2 * k; }
  std::span<const double> context_block(int c) const {
    return {values.data() + static_cast<std::size_t>(c) * block_len(),
            static_cast<std::size_t>(block_len())};
  }
};

// One 2K block [d_1, y~_1, ..., d_K, y~_K] from class-c members of the subset.
// Classification label slots are the constant 1; fewer than K members repeat
// the final (distance, label) pair.
std::vector<double> class_meta_rep(std::span<const double> query, const EncodedDataset& dataset,
                                   std::span<const int> subset, int class_id,
                                   const MetricSpec& spec, int k,
                                   std::optional<int> exclude = std::nullopt);

// Regression block over the whole subset; label slots carry the neighbors'
// standardized targets.
std::vector<double> regression_meta_rep(std::span<const double> query, const EncodedDataset& dataset,
                                        std::span<const int> subset, const MetricSpec& spec, int k,
                                        std::optional<int> exclude = std::nullopt);

// Caches the per-class reference subsets for one reference set so batches of
// queries share the setup. Construction is cheap; build() is pure and safe to
// call concurrently.
class MetaRepBuilder {
 public:
  MetaRepBuilder(const EncodedDataset& data, std::vector<int> subset,
                 std::vector<MetricSpec> specs, int k, bool normalize = true);

  MetaRep build(std::span<const double> query, std::optional<int> exclude = std::nullopt) const;
  MetaRep build_for_row(int row, bool self_exclude) const;

  int input_dim() const { return static_cast<int>(specs_.size()) * 2 * k_; }
  int contexts() const { return contexts_; }
  const std::vector<int>& reference_rows() const { return subset_; }
  const EncodedDataset& data() const { return data_; }
  const std::vector<MetricSpec>& specs() const { return specs_; }
  int k() const { return k_; }

 private:
  const EncodedDataset& data_;
  std::vector<int> subset_;
  std::vector<MetricSpec> specs_;
  int k_;
  bool normalize_;
  int contexts_;
  std::vector<std::vector<int>> class_subsets_;
};

// Convenience wrapper: one-off meta-representation of a query.
MetaRep full_meta_rep(std::span<const double> query, const EncodedDataset& dataset,
                      std::span<const int> subset, const std::vector<MetricSpec>& specs, int k,
                      std::optional<int> exclude = std::nullopt, bool normalize = true);

}  // namespace tabmeta
