#pragma once

#include <map>
#include <optional>
#include <string>

#include "tabmeta/synthetic.hpp"

namespace tabmeta {

enum class KnnWeighting { Uniform, Softmax };

// Plain and distance-weighted kNN over a reference subset. Uniform
// classification takes the majority class (ties break to the smallest class
// index); softmax weights each retrieved neighbor by softmax(-distance).
// Regression averages (weighted) neighbor targets; values return in original
// target units.
Prediction knn_predict(std::span<const double> query, const EncodedDataset& reference,
                       std::span<const int> subset, const MetricSpec& spec, int k,
                       KnnWeighting weighting);

struct MetricValue {
  double value = 0.0;  // accuracy (higher better) or RMSE (lower better)
};

// accuracy for classification, RMSE (original units) for regression.
double metrics(const std::vector<Prediction>& preds, const std::vector<double>& truths,
               TaskKind task);

enum class RankDirection { HigherBetter, LowerBetter };

// Per dataset, ranks methods (1 = best; ties share the mean rank), then
// averages the ranks over datasets.
std::vector<double> average_rank(const std::vector<std::vector<double>>& table,
                                 RankDirection direction);

struct ReportRow {
  std::string dataset;
  std::string method;
  int shot = 0;  // 0 = full-shot
  std::uint64_t seed = 0;
  double metric = 0.0;
};

struct ExperimentReport {
  TaskKind task = TaskKind::Classification;
  std::vector<std::string> methods;
  std::vector<ReportRow> rows;
  std::map<std::string, double> average_ranks;
  std::vector<std::uint64_t> seeds;

  std::string to_csv() const;
  std::string summary_json() const;
};

struct ProtocolConfig {
  std::vector<std::string> methods;  // see kKnownMethods
  std::vector<int> shots;            // empty = full-shot protocol
  int protocol_seeds = 3;
  TrainConfig train;
};

extern const std::vector<std::string> kKnownMethods;
bool method_known(const std::string& name);

// Full experiment: pre-train per protocol seed, then evaluate every method on
// every downstream dataset's test split (per shot setting when given).
ExperimentReport run_protocol(const PretrainCorpus& corpus,
                              const std::vector<CorpusMember>& downstream,
                              const ProtocolConfig& cfg);

}  // namespace tabmeta
