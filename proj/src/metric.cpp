#include "tabmeta/metric.hpp"

#include <algorithm>
#include <cmath>

namespace tabmeta {

const char* distance_name(DistanceKind k) {
  switch (k) {
    case DistanceKind::Manhattan: return "manhattan";
    case DistanceKind::Euclidean: return "euclidean";
    case DistanceKind::BrayCurtis: return "braycurtis";
    case DistanceKind::Canberra: return "canberra";
    case DistanceKind::Cosine: return "cosine";
    case DistanceKind::Chebyshev: return "chebyshev";
  }
  return "unknown";
}

DistanceKind distance_from_string(const std::string& s) {
  if (s == "manhattan") return DistanceKind::Manhattan;
  if (s == "euclidean") return DistanceKind::Euclidean;
  if (s == "braycurtis") return DistanceKind::BrayCurtis;
  if (s == "canberra") return DistanceKind::Canberra;
  if (s == "cosine") return DistanceKind::Cosine;
  if (s == "chebyshev") return DistanceKind::Chebyshev;
  throw Error(ErrorCode::ConfigError, "unknown distance kind '" + s + "'");
}

MetricSpec MetricSpec::uniform(DistanceKind kind, std::size_t dim) {
  MetricSpec spec;
  spec.kind = kind;
  spec.weights.assign(dim, dim > 0 ? 1.0 / static_cast<double>(dim) : 0.0);
  return spec;
}

double weighted_distance(std::span<const double> a, std::span<const double> b,
                         const MetricSpec& spec) {
  const std::size_t d = spec.weights.size();
  if (a.size() != d || b.size() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "distance over " + std::to_string(a.size()) + "/" + std::to_string(b.size()) +
                    "-dim vectors with " + std::to_string(d) + " weights");
  }
  const double* w = spec.weights.data();
  switch (spec.kind) {
    case DistanceKind::Manhattan: {
      double sum = 0.0;
      for (std::size_t l = 0; l < d; ++l) sum += w[l] * std::abs(a[l] - b[l]);
      return sum;
    }
    case DistanceKind::Euclidean: {
      double sum = 0.0;
      for (std::size_t l = 0; l < d; ++l) {
        const double diff = a[l] - b[l];
        sum += w[l] * diff * diff;
      }
      return std::sqrt(sum);
    }
    case DistanceKind::BrayCurtis: {
      double num = 0.0, den = 0.0;
      for (std::size_t l = 0; l < d; ++l) {
        num += w[l] * std::abs(a[l] - b[l]);
        den += w[l] * std::abs(a[l] + b[l]);
      }
      return den > 0.0 ? num / den : 0.0;
    }
    case DistanceKind::Canberra: {
      double sum = 0.0;
      for (std::size_t l = 0; l < d; ++l) {
        const double den = std::abs(a[l]) + std::abs(b[l]);
        if (den > 0.0) sum += w[l] * std::abs(a[l] - b[l]) / den;
      }
      return sum;
    }
    case DistanceKind::Cosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t l = 0; l < d; ++l) {
        dot += w[l] * a[l] * b[l];  // <sqrt(w)a, sqrt(w)b> = sum w*a*b
        na += w[l] * a[l] * a[l];
        nb += w[l] * b[l] * b[l];
      }
      if (na <= 0.0 || nb <= 0.0) return 0.0;
      return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
    }
    case DistanceKind::Chebyshev: {
      double best = 0.0;
      for (std::size_t l = 0; l < d; ++l) best = std::max(best, w[l] * std::abs(a[l] - b[l]));
      return best;
    }
  }
  return 0.0;
}

}  // namespace tabmeta
