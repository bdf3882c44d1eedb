#include "tabmeta/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabmeta/rng.hpp"

namespace tabmeta {

namespace {

void check_ratios(const std::array<double, 3>& r) {
  for (double x : r) {
    if (x <= 0.0) throw Error(ErrorCode::ConfigError, "split ratios must be positive");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw Error(ErrorCode::ConfigError, "split ratios must sum to 1");
  }
}

// Largest-remainder allocation of `total` units over quotas proportional to
// group sizes. Guarantees each group gets floor(quota) or ceil(quota).
std::vector<int> hamilton(const std::vector<int>& group_sizes, double ratio, int total,
                          const std::vector<int>& capacity) {
  const std::size_t g = group_sizes.size();
  std::vector<int> alloc(g, 0);
  std::vector<std::pair<double, std::size_t>> frac;
  int assigned = 0;
  for (std::size_t i = 0; i < g; ++i) {
    const double quota = group_sizes[i] * ratio;
    alloc[i] = std::min(static_cast<int>(std::floor(quota)), capacity[i]);
    assigned += alloc[i];
    frac.emplace_back(quota - std::floor(quota), i);
  }
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;  // deterministic tie rule
  });
  for (const auto& [f, i] : frac) {
    if (assigned >= total) break;
    if (alloc[i] < capacity[i]) {
      ++alloc[i];
      ++assigned;
    }
  }
  // If capacities blocked some groups, spill the remainder wherever room is left.
  for (std::size_t i = 0; i < g && assigned < total; ++i) {
    while (alloc[i] < capacity[i] && assigned < total) {
      ++alloc[i];
      ++assigned;
    }
  }
  return alloc;
}

}  // namespace

SplitIndices split_by_labels(std::size_t n, const std::vector<int>& labels, int class_count,
                             std::array<double, 3> ratios, std::uint64_t seed) {
  check_ratios(ratios);
  if (n < 5) throw Error(ErrorCode::TooFewInstances, "need at least 5 instances to split");

  Rng rng(derive_seed(seed, "split"));
  SplitIndices out;
  out.seed = seed;

  const int n_train = static_cast<int>(std::lround(n * ratios[0]));
  const int n_val = static_cast<int>(std::lround(n * ratios[1]));

  bool stratify = false;
  std::vector<std::vector<int>> per_class;
  if (!labels.empty() && class_count >= 2) {
    per_class.resize(class_count);
    for (std::size_t i = 0; i < n; ++i) per_class[labels[i]].push_back(static_cast<int>(i));
    stratify = std::all_of(per_class.begin(), per_class.end(),
                           [](const auto& c) { return c.size() >= 3; });
  }

  if (!stratify) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    out.train.assign(order.begin(), order.begin() + n_train);
    out.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
    out.test.assign(order.begin() + n_train + n_val, order.end());
  } else {
    std::vector<int> sizes, cap_all;
    for (const auto& c : per_class) {
      sizes.push_back(static_cast<int>(c.size()));
      cap_all.push_back(static_cast<int>(c.size()));
    }
    const std::vector<int> train_alloc = hamilton(sizes, ratios[0], n_train, cap_all);
    std::vector<int> cap_rest(sizes.size());
    for (std::size_t c = 0; c < sizes.size(); ++c) cap_rest[c] = sizes[c] - train_alloc[c];
    const std::vector<int> val_alloc = hamilton(sizes, ratios[1], n_val, cap_rest);

    for (std::size_t c = 0; c < per_class.size(); ++c) {
      std::vector<int>& members = per_class[c];
      rng.shuffle(members);
      int t = train_alloc[c], v = val_alloc[c];
      out.train.insert(out.train.end(), members.begin(), members.begin() + t);
      out.val.insert(out.val.end(), members.begin() + t, members.begin() + t + v);
      out.test.insert(out.test.end(), members.begin() + t + v, members.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
  }
  return out;
}

SplitIndices split(const EncodedDataset& dataset, std::array<double, 3> ratios, std::uint64_t seed) {
  return split_by_labels(static_cast<std::size_t>(dataset.size()), dataset.labels,
                         dataset.class_count, ratios, seed);
}

std::vector<int> sample_few_shot(const std::vector<int>& train, const std::vector<int>& labels,
                                 int shots, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "fewshot"));
  int max_class = -1;
  for (int idx : train) max_class = std::max(max_class, labels[idx]);
  std::vector<std::vector<int>> per_class(max_class + 1);
  for (int idx : train) per_class[labels[idx]].push_back(idx);

  std::vector<int> out;
  for (auto& members : per_class) {
    std::sort(members.begin(), members.end());
    auto chosen = rng.sample_without_replacement(members, static_cast<std::size_t>(shots));
    out.insert(out.end(), chosen.begin(), chosen.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tabmeta
