#pragma once

#include <memory>

#include "tabmeta/checkpoint.hpp"
#include "tabmeta/mutual_info.hpp"
#include "tabmeta/split.hpp"

namespace tabmeta {

struct TrainConfig {
  int k = 128;
  std::vector<DistanceKind> kinds = {DistanceKind::Manhattan, DistanceKind::Euclidean,
                                     DistanceKind::BrayCurtis};
  int batch_size = 1024;
  double pretrain_lr = 0.001;
  int pretrain_iters = 10000;
  double finetune_lr = 0.01;
  int finetune_epochs = 30;
  std::uint64_t seed = 0;
  bool self_exclude = true;
  bool normalize_meta = true;

  int hidden_width = 256;
  double dropout = 0.1;
  OptimizerKind optimizer = OptimizerKind::Adam;
  bool finetune_head_only = false;

  bool early_stop = true;
  int eval_interval = 100;
  int early_stop_patience = 20;
  int threads = 0;  // <= 0: all cores

  int input_dim() const { return static_cast<int>(kinds.size()) * 2 * k; }
  void validate() const;
};

// Defaults per task: K and the distance set differ between classification
// and regression.
TrainConfig default_train_config(TaskKind task);

struct CorpusMember {
  EncodedDataset data;
  SplitIndices split;
  std::vector<MetricSpec> specs;  // one per configured distance kind
};

struct PretrainCorpus {
  TaskKind task = TaskKind::Classification;
  std::vector<CorpusMember> members;
};

// Training-split meta-representation cache for one dataset. The builder holds
// the reference-set identity; reps[i] describes train_rows()[i].
struct PreparedMember {
  std::unique_ptr<MetaRepBuilder> builder;
  std::vector<MetaRep> train_reps;
  std::vector<BatchItem> items;  // rep + label/target per training row

  const std::vector<int>& train_rows() const { return builder->reference_rows(); }
};

PreparedMember prepare_member(const CorpusMember& member, const TrainConfig& cfg);

struct PretrainResult {
  ScorerParams params;
  double final_train_loss = 0.0;
  double best_val_loss = 0.0;
  int iterations_run = 0;
  std::vector<double> train_loss_trace;  // one entry per iteration
};

// Joint pre-training: per iteration, sample one corpus member uniformly,
// draw a mini-batch from its training split, and update the shared scorer.
PretrainResult pretrain(const PretrainCorpus& corpus, const TrainConfig& cfg);

struct Prediction {
  int class_id = -1;
  double value = 0.0;  // regression output, original units
};

// Applies the scorer to unseen queries against a fixed reference split.
// No parameter update happens; queries are not excluded from the reference.
std::vector<Prediction> predict_direct(const ScorerParams& params, const MetaRepBuilder& reference,
                                       const RowMatrix& queries, int threads = 0);

Prediction predict_direct_one(const ScorerParams& params, const MetaRepBuilder& reference,
                              std::span<const double> query);

// Continues training on one downstream dataset, starting from the given
// parameters. Updates all layers or only the head. Returns the final-epoch
// parameters.
ScorerParams finetune(const ScorerParams& params, const CorpusMember& downstream,
                      const TrainConfig& cfg);

}  // namespace tabmeta
