#include "tabmeta/synthetic.hpp"

#include <cmath>
#include <unordered_map>

#include "tabmeta/rng.hpp"

namespace tabmeta {

namespace {

constexpr double kTwoPi = 6.283185307179586;

DatasetSchema numeric_schema(const std::string& name, TaskKind task, int dim) {
  DatasetSchema schema;
  schema.name = name;
  schema.task = task;
  schema.class_count = task == TaskKind::Regression ? 1 : 0;
  for (int i = 0; i < dim; ++i) {
    schema.columns.push_back({"x" + std::to_string(i), ColumnKind::Numerical});
  }
  schema.columns.push_back({"y", ColumnKind::Numerical});
  schema.label_column = "y";
  return schema;
}

// Class means with pairwise separation >= 4 within-class stddevs (stddev = 1).
std::vector<std::vector<double>> sample_means(Rng& rng, int classes, int dim) {
  double box = 5.0;
  for (;;) {
    std::vector<std::vector<double>> means;
    bool ok = true;
    for (int c = 0; c < classes && ok; ++c) {
      bool placed = false;
      for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
        std::vector<double> m(dim);
        for (double& v : m) v = rng.uniform_in(-box, box);
        placed = true;
        for (const auto& other : means) {
          double sq = 0.0;
          for (int l = 0; l < dim; ++l) sq += (m[l] - other[l]) * (m[l] - other[l]);
          if (std::sqrt(sq) < 4.0) {
            placed = false;
            break;
          }
        }
        if (placed) means.push_back(std::move(m));
      }
      ok = placed;
    }
    if (ok) return means;
    box *= 1.5;  // more room, retry deterministically
  }
}

RawTable generate_raw(const SyntheticSpec& spec, std::uint64_t dataset_seed, const std::string& name) {
  Rng rng(derive_seed(dataset_seed, "synth-gen"));
  const int dim = spec.dim_min + static_cast<int>(rng.uniform_int(
                      static_cast<std::uint64_t>(spec.dim_max - spec.dim_min + 1)));
  const int n = spec.size_min + static_cast<int>(rng.uniform_int(
                    static_cast<std::uint64_t>(spec.size_max - spec.size_min + 1)));

  RawTable table;
  table.schema = numeric_schema(name, spec.task, dim);

  if (spec.task == TaskKind::Classification) {
    const int classes = spec.class_min + static_cast<int>(rng.uniform_int(
                            static_cast<std::uint64_t>(spec.class_max - spec.class_min + 1)));
    const auto means = sample_means(rng, classes, dim);
    for (int i = 0; i < n; ++i) {
      const int c = i % classes;  // near-balanced class sizes
      std::vector<Cell> row(dim + 1);
      for (int l = 0; l < dim; ++l) row[l] = Cell::num(means[c][l] + rng.normal());
      row[dim] = Cell::num(static_cast<double>(c));
      table.rows.push_back(std::move(row));
    }
  } else {
    std::vector<double> amp(dim), slope(dim), freq(dim), phase(dim);
    for (int l = 0; l < dim; ++l) {
      amp[l] = rng.normal();
      slope[l] = rng.normal();
      freq[l] = rng.uniform_in(0.5, 2.0);
      phase[l] = rng.uniform_in(0.0, kTwoPi);
    }
    std::vector<std::vector<double>> xs(n, std::vector<double>(dim));
    std::vector<double> clean(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int l = 0; l < dim; ++l) {
        xs[i][l] = rng.uniform_in(-2.0, 2.0);
        clean[i] += amp[l] * std::sin(freq[l] * xs[i][l] + phase[l]) + slope[l] * xs[i][l];
      }
    }
    double mean = 0.0, sq = 0.0;
    for (double v : clean) mean += v;
    mean /= n;
    for (double v : clean) sq += (v - mean) * (v - mean);
    const double signal_std = std::sqrt(sq / n);
    const double noise_std = signal_std > 0.0 ? 0.1 * signal_std : 0.1;
    for (int i = 0; i < n; ++i) {
      std::vector<Cell> row(dim + 1);
      for (int l = 0; l < dim; ++l) row[l] = Cell::num(xs[i][l]);
      row[dim] = Cell::num(clean[i] + noise_std * rng.normal());
      table.rows.push_back(std::move(row));
    }
  }

  rng.shuffle(table.rows);
  return table;
}

CorpusMember make_member(const SyntheticSpec& spec, std::uint64_t dataset_seed,
                         const std::string& name, const std::vector<DistanceKind>& kinds) {
  RawTable raw = generate_raw(spec, dataset_seed, name);

  std::vector<std::string> universe;
  std::vector<int> raw_labels;
  int class_count = 1;
  if (spec.task == TaskKind::Classification) {
    universe = collect_label_levels(raw);
    class_count = static_cast<int>(universe.size());
    const int li = raw.schema.label_index();
    std::unordered_map<std::string, int> map;
    for (std::size_t i = 0; i < universe.size(); ++i) map[universe[i]] = static_cast<int>(i);
    for (const auto& row : raw.rows) raw_labels.push_back(map.at(label_text(row[li])));
  }

  CorpusMember member;
  member.split = split_by_labels(raw.row_count(), raw_labels, class_count, spec.ratios,
                                 derive_seed(dataset_seed, "synth-split"));
  const EncodeStats stats = fit_encoder_subset(raw, member.split.train, universe);
  member.data = encode(raw, stats);
  for (DistanceKind kind : kinds) {
    member.specs.push_back(fit_metric(member.data, member.split.train, kind));
  }
  return member;
}

}  // namespace

SyntheticCorpus make_synthetic_corpus(const SyntheticSpec& spec,
                                      const std::vector<DistanceKind>& kinds) {
  if (spec.dim_min < 1 || spec.dim_max < spec.dim_min || spec.size_max < spec.size_min ||
      spec.size_min < 5 || spec.class_max < spec.class_min) {
    throw Error(ErrorCode::ConfigError, "degenerate synthetic ranges");
  }
  SyntheticCorpus out;
  out.corpus.task = spec.task;
  const std::string stem = spec.task == TaskKind::Classification ? "synth-cls-" : "synth-reg-";
  for (int t = 0; t < spec.corpus_size; ++t) {
    out.corpus.members.push_back(make_member(spec, derive_seed(spec.seed, "synth", t),
                                             stem + std::to_string(t), kinds));
  }
  for (int h = 0; h < spec.heldout_count; ++h) {
    out.heldout.push_back(make_member(spec, derive_seed(spec.seed, "synth-heldout", h),
                                      stem + "heldout-" + std::to_string(h), kinds));
  }
  return out;
}

EncodedDataset make_synthetic_dataset(const SyntheticSpec& spec, std::uint64_t dataset_seed,
                                      const std::string& name) {
  SyntheticSpec one = spec;
  return make_member(one, dataset_seed, name, {DistanceKind::Euclidean}).data;
}

}  // namespace tabmeta
