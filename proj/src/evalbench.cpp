#include "tabmeta/evalbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace tabmeta {

Prediction knn_predict(std::span<const double> query, const EncodedDataset& reference,
                       std::span<const int> subset, const MetricSpec& spec, int k,
                       KnnWeighting weighting) {
  const NeighborList nn = query_topk(query, reference, subset, spec, k);
  const std::size_t found = nn.entries.size();

  std::vector<double> weights(found, 1.0 / static_cast<double>(found));
  if (weighting == KnnWeighting::Softmax) {
    double mx = -nn.entries[0].distance;
    for (const auto& e : nn.entries) mx = std::max(mx, -e.distance);
    double sum = 0.0;
    for (std::size_t j = 0; j < found; ++j) {
      weights[j] = std::exp(-nn.entries[j].distance - mx);
      sum += weights[j];
    }
    for (double& w : weights) w /= sum;
  }

  Prediction out;
  if (reference.task == TaskKind::Classification) {
    std::vector<double> votes(reference.class_count, 0.0);
    for (std::size_t j = 0; j < found; ++j) {
      votes[static_cast<int>(nn.entries[j].label)] += weights[j];
    }
    out.class_id = predict_class(votes);
  } else {
    double acc = 0.0;
    for (std::size_t j = 0; j < found; ++j) acc += weights[j] * nn.entries[j].label;
    out.value = reference.destandardize(acc);
  }
  return out;
}

double metrics(const std::vector<Prediction>& preds, const std::vector<double>& truths,
               TaskKind task) {
  if (preds.size() != truths.size() || preds.empty()) {
    throw Error(ErrorCode::LengthMismatch, "predictions and truths must align and be non-empty");
  }
  if (task == TaskKind::Classification) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (preds[i].class_id == static_cast<int>(truths[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(preds.size());
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double err = preds[i].value - truths[i];
    sq += err * err;
  }
  return std::sqrt(sq / static_cast<double>(preds.size()));
}

std::vector<double> average_rank(const std::vector<std::vector<double>>& table,
                                 RankDirection direction) {
  if (table.empty()) return {};
  const std::size_t methods = table.front().size();
  std::vector<double> totals(methods, 0.0);
  for (const auto& row : table) {
    if (row.size() != methods) throw Error(ErrorCode::LengthMismatch, "ragged rank table");
    std::vector<std::size_t> order(methods);
    std::iota(order.begin(), order.end(), 0);
    auto better = [&](std::size_t a, std::size_t b) {
      return direction == RankDirection::HigherBetter ? row[a] > row[b] : row[a] < row[b];
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (row[a] != row[b]) return better(a, b);
      return a < b;
    });
    // mean rank over tie groups
    std::size_t i = 0;
    while (i < methods) {
      std::size_t j = i;
      while (j + 1 < methods && row[order[j + 1]] == row[order[i]]) ++j;
      const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) totals[order[t]] += mean_rank;
      i = j + 1;
    }
  }
  for (double& t : totals) t /= static_cast<double>(table.size());
  return totals;
}

const std::vector<std::string> kKnownMethods = {"metarep-direct", "metarep-finetuned",
                                                "knn-uniform", "knn-softmax", "majority"};

bool method_known(const std::string& name) {
  return std::find(kKnownMethods.begin(), kKnownMethods.end(), name) != kKnownMethods.end() ||
         name == "mean" || name == "baseline";
}

namespace {

std::string canonical_method(const std::string& name) {
  if (name == "mean" || name == "baseline") return "majority";
  return name;
}

std::vector<double> test_truths(const CorpusMember& member) {
  std::vector<double> out;
  out.reserve(member.split.test.size());
  for (int idx : member.split.test) {
    out.push_back(member.data.task == TaskKind::Classification
                      ? static_cast<double>(member.data.labels[idx])
                      : member.data.original_target(idx));
  }
  return out;
}

RowMatrix test_queries(const CorpusMember& member) {
  RowMatrix q(static_cast<Eigen::Index>(member.split.test.size()), member.data.dim());
  for (std::size_t i = 0; i < member.split.test.size(); ++i) {
    q.row(static_cast<Eigen::Index>(i)) = member.data.X.row(member.split.test[i]);
  }
  return q;
}

Prediction baseline_predict(const EncodedDataset& data, const std::vector<int>& reference) {
  Prediction out;
  if (data.task == TaskKind::Classification) {
    std::vector<double> counts(data.class_count, 0.0);
    for (int idx : reference) counts[data.labels[idx]] += 1.0;
    out.class_id = predict_class(counts);
  } else {
    double sum = 0.0;
    for (int idx : reference) sum += data.original_target(idx);
    out.value = reference.empty() ? 0.0 : sum / static_cast<double>(reference.size());
  }
  return out;
}

}  // namespace

ExperimentReport run_protocol(const PretrainCorpus& corpus,
                              const std::vector<CorpusMember>& downstream,
                              const ProtocolConfig& cfg) {
  if (downstream.empty()) throw Error(ErrorCode::EmptyCorpus, "no downstream datasets");
  if (cfg.methods.empty()) throw Error(ErrorCode::ConfigError, "no methods requested");
  for (const auto& m : cfg.methods) {
    if (!method_known(m)) {
      std::string valid;
      for (const auto& k : kKnownMethods) valid += (valid.empty() ? "" : ", ") + k;
      throw Error(ErrorCode::ConfigError, "unknown method '" + m + "' (valid: " + valid + ")");
    }
  }

  ExperimentReport report;
  report.task = corpus.task;
  for (const auto& m : cfg.methods) report.methods.push_back(canonical_method(m));

  const bool needs_model =
      std::any_of(report.methods.begin(), report.methods.end(),
                  [](const std::string& m) { return m.rfind("metarep", 0) == 0; });

  std::vector<int> shot_settings = cfg.shots;
  if (shot_settings.empty()) shot_settings.push_back(0);
  if (corpus.task == TaskKind::Regression && !cfg.shots.empty()) {
    throw Error(ErrorCode::ConfigError, "few-shot protocol applies to classification only");
  }

  for (int s = 0; s < cfg.protocol_seeds; ++s) {
    const std::uint64_t run_seed = derive_seed(cfg.train.seed, "protocol", static_cast<std::uint64_t>(s));
    report.seeds.push_back(run_seed);
    TrainConfig tcfg = cfg.train;
    tcfg.seed = run_seed;

    ScorerParams pretrained;
    if (needs_model) pretrained = pretrain(corpus, tcfg).params;

    for (std::size_t d = 0; d < downstream.size(); ++d) {
      const CorpusMember& member = downstream[d];
      const RowMatrix queries = test_queries(member);
      const std::vector<double> truths = test_truths(member);

      for (int shot : shot_settings) {
        std::vector<int> reference = member.split.train;
        std::vector<MetricSpec> specs = member.specs;
        if (shot > 0) {
          reference = sample_few_shot(member.split.train, member.data.labels, shot,
                                      derive_seed(run_seed, "shots", d * 1000 + shot));
          specs.clear();
          for (const auto& base : member.specs) {
            specs.push_back(fit_metric(member.data, reference, base.kind));
          }
        }

        for (const auto& method : report.methods) {
          std::vector<Prediction> preds;
          preds.reserve(truths.size());
          if (method == "metarep-direct" || method == "metarep-finetuned") {
            ScorerParams params = pretrained;
            if (method == "metarep-finetuned") {
              CorpusMember view;
              view.data = member.data;
              view.split.train = reference;
              view.specs = specs;
              params = finetune(pretrained, view, tcfg);
            }
            MetaRepBuilder builder(member.data, reference, specs, tcfg.k, tcfg.normalize_meta);
            preds = predict_direct(params, builder, queries, tcfg.threads);
          } else if (method == "knn-uniform" || method == "knn-softmax") {
            const KnnWeighting w =
                method == "knn-uniform" ? KnnWeighting::Uniform : KnnWeighting::Softmax;
            for (Eigen::Index q = 0; q < queries.rows(); ++q) {
              const double* ptr = queries.row(q).data();
              preds.push_back(knn_predict({ptr, static_cast<std::size_t>(queries.cols())},
                                          member.data, reference, specs.front(), tcfg.k, w));
            }
          } else {  // majority / mean
            const Prediction base = baseline_predict(member.data, reference);
            preds.assign(truths.size(), base);
          }

          ReportRow row;
          row.dataset = member.data.name;
          row.method = method;
          row.shot = shot;
          row.seed = run_seed;
          row.metric = metrics(preds, truths, corpus.task);
          report.rows.push_back(std::move(row));
        }
      }
    }
  }

  // Rank on the per-(dataset, shot) seed-mean table.
  std::vector<std::vector<double>> table;
  for (std::size_t d = 0; d < downstream.size(); ++d) {
    for (int shot : shot_settings) {
      std::vector<double> cells(report.methods.size(), 0.0);
      std::vector<int> counts(report.methods.size(), 0);
      for (const auto& row : report.rows) {
        if (row.dataset != downstream[d].data.name || row.shot != shot) continue;
        const auto it = std::find(report.methods.begin(), report.methods.end(), row.method);
        const std::size_t m = static_cast<std::size_t>(it - report.methods.begin());
        cells[m] += row.metric;
        counts[m] += 1;
      }
      for (std::size_t m = 0; m < cells.size(); ++m) {
        if (counts[m] > 0) cells[m] /= counts[m];
      }
      table.push_back(std::move(cells));
    }
  }
  const auto ranks = average_rank(table, corpus.task == TaskKind::Classification
                                             ? RankDirection::HigherBetter
                                             : RankDirection::LowerBetter);
  for (std::size_t m = 0; m < report.methods.size(); ++m) {
    report.average_ranks[report.methods[m]] = ranks[m];
  }
  return report;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out << "dataset,method,shot,seed,metric\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.metric);
    out << row.dataset << ',' << row.method << ',';
    if (row.shot > 0) {
      out << row.shot;
    } else {
      out << "full";
    }
    out << ',' << row.seed << ',' << buf << '\n';
  }
  return out.str();
}

std::string ExperimentReport::summary_json() const {
  nlohmann::json j;
  j["task"] = task_name(task);
  j["seeds"] = seeds;
  nlohmann::json ranks;
  for (const auto& [method, rank] : average_ranks) ranks[method] = rank;
  j["average_rank"] = std::move(ranks);
  return j.dump(2);
}

}  // namespace tabmeta
