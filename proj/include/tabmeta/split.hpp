#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tabmeta/encode.hpp"

namespace tabmeta {

struct SplitIndices {
  std::vector<int> train, val, test;
  std::uint64_t seed = 0;
};

// Deterministic shuffled split. Classification stratifies per class whenever
// every class has at least 3 instances; global sizes follow the ratios within
// one instance (largest-remainder allocation keeps the totals exact).
SplitIndices split(const EncodedDataset& dataset, std::array<double, 3> ratios, std::uint64_t seed);

// Label-level variant used before encoding (regression passes empty labels).
SplitIndices split_by_labels(std::size_t n, const std::vector<int>& labels, int class_count,
                             std::array<double, 3> ratios, std::uint64_t seed);

// Per class, min(shots, class size) training indices without replacement.
std::vector<int> sample_few_shot(const std::vector<int>& train, const std::vector<int>& labels,
                                 int shots, std::uint64_t seed);

}  // namespace tabmeta
