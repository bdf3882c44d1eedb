#pragma once

#include <span>
#include <string>
#include <vector>

#include "tabmeta/error.hpp"

namespace tabmeta {

enum class DistanceKind { Manhattan, Euclidean, BrayCurtis, Canberra, Cosine, Chebyshev };

const char* distance_name(DistanceKind k);
DistanceKind distance_from_string(const std::string& s);

// A distance kind plus per-attribute weights. Weights are nonnegative and sum
// to 1 unless the uniform fallback was taken (then each is exactly 1/d).
struct MetricSpec {
  DistanceKind kind = DistanceKind::Euclidean;
  std::vector<double> weights;

  static MetricSpec uniform(DistanceKind kind, std::size_t dim);
};

double weighted_distance(std::span<const double> a, std::span<const double> b,
                         const MetricSpec& spec);

}  // namespace tabmeta
