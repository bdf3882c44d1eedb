#include "tabmeta/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tabmeta/parallel.hpp"

namespace tabmeta {

void TrainConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::ConfigError, "K must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::ConfigError, "batch_size must be >= 1");
  if (pretrain_lr <= 0.0 || finetune_lr <= 0.0) {
    throw Error(ErrorCode::ConfigError, "learning rates must be positive");
  }
  if (kinds.empty()) throw Error(ErrorCode::ConfigError, "at least one distance kind required");
  if (pretrain_iters < 0 || finetune_epochs < 0) {
    throw Error(ErrorCode::ConfigError, "iteration/epoch counts must be >= 0");
  }
}

TrainConfig default_train_config(TaskKind task) {
  TrainConfig cfg;
  if (task == TaskKind::Regression) {
    cfg.k = 16;
    cfg.kinds = {DistanceKind::Manhattan};
  }
  return cfg;
}

PreparedMember prepare_member(const CorpusMember& member, const TrainConfig& cfg) {
  if (member.data.task == TaskKind::Classification) {
    std::vector<int> per_class(member.data.class_count, 0);
    for (int idx : member.split.train) per_class[member.data.labels[idx]] += 1;
    const int needed = cfg.self_exclude ? 2 : 1;
    for (int c = 0; c < member.data.class_count; ++c) {
      if (per_class[c] < needed) {
        throw Error(ErrorCode::ContextTooSmall,
                    "dataset '" + member.data.name + "' class " + std::to_string(c) + " has " +
                        std::to_string(per_class[c]) + " training member(s), need >= " +
                        std::to_string(needed));
      }
    }
  } else if (member.split.train.empty()) {
    throw Error(ErrorCode::ContextTooSmall, "dataset '" + member.data.name + "' has no training rows");
  }

  PreparedMember prep;
  prep.builder = std::make_unique<MetaRepBuilder>(member.data, member.split.train, member.specs,
                                                  cfg.k, cfg.normalize_meta);
  const std::vector<int>& rows = prep.builder->reference_rows();
  prep.train_reps.resize(rows.size());
  MetaRepBuilder* builder = prep.builder.get();
  const bool self_exclude = cfg.self_exclude;
  parallel_for(rows.size(), cfg.threads, [&](std::size_t i) {
    prep.train_reps[i] = builder->build_for_row(rows[i], self_exclude);
  });

  prep.items.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    BatchItem item;
    item.rep = &prep.train_reps[i];
    if (member.data.task == TaskKind::Classification) {
      item.label = member.data.labels[rows[i]];
    } else {
      item.target = member.data.targets[rows[i]];
    }
    prep.items.push_back(item);
  }
  return prep;
}

namespace {

// Validation-split items (reference = training split, no exclusion).
std::vector<BatchItem> prepare_validation(const CorpusMember& member, const MetaRepBuilder& builder,
                                          std::vector<MetaRep>& storage, int threads) {
  const std::vector<int>& val = member.split.val;
  storage.resize(val.size());
  parallel_for(val.size(), threads, [&](std::size_t i) {
    storage[i] = builder.build_for_row(val[i], /*self_exclude=*/false);
  });
  std::vector<BatchItem> items;
  items.reserve(val.size());
  for (std::size_t i = 0; i < val.size(); ++i) {
    BatchItem item;
    item.rep = &storage[i];
    if (member.data.task == TaskKind::Classification) {
      item.label = member.data.labels[val[i]];
    } else {
      item.target = member.data.targets[val[i]];
    }
    items.push_back(item);
  }
  return items;
}

}  // namespace

PretrainResult pretrain(const PretrainCorpus& corpus, const TrainConfig& cfg) {
  cfg.validate();
  if (corpus.members.empty()) throw Error(ErrorCode::EmptyCorpus, "pre-training corpus is empty");
  for (const auto& member : corpus.members) {
    if (member.data.task != corpus.task) {
      throw Error(ErrorCode::ConfigError, "corpus member task differs from corpus task");
    }
    if (member.specs.size() != cfg.kinds.size()) {
      throw Error(ErrorCode::ConfigError, "corpus member needs one MetricSpec per distance kind");
    }
  }

  std::vector<PreparedMember> prepared;
  prepared.reserve(corpus.members.size());
  for (const auto& member : corpus.members) prepared.push_back(prepare_member(member, cfg));

  std::vector<std::vector<MetaRep>> val_storage(corpus.members.size());
  std::vector<std::vector<BatchItem>> val_items(corpus.members.size());
  if (cfg.early_stop) {
    for (std::size_t t = 0; t < corpus.members.size(); ++t) {
      val_items[t] = prepare_validation(corpus.members[t], *prepared[t].builder, val_storage[t],
                                        cfg.threads);
    }
  }

  PretrainResult result;
  result.params = init_params(cfg.input_dim(), cfg.hidden_width, derive_seed(cfg.seed, "init"),
                              cfg.dropout);
  OptimizerState opt = OptimizerState::for_params(result.params, cfg.optimizer);

  Rng loop_rng(derive_seed(cfg.seed, "pretrain-loop"));
  const std::size_t member_count = corpus.members.size();

  double best_val = std::numeric_limits<double>::infinity();
  int evals_since_best = 0;

  for (int iter = 0; iter < cfg.pretrain_iters; ++iter) {
    const std::size_t t = static_cast<std::size_t>(loop_rng.uniform_int(member_count));
    const auto& items = prepared[t].items;

    std::vector<int> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t take = std::min<std::size_t>(items.size(), static_cast<std::size_t>(cfg.batch_size));
    auto chosen = loop_rng.sample_without_replacement(order, take);

    std::vector<BatchItem> batch;
    batch.reserve(chosen.size());
    for (int i : chosen) batch.push_back(items[i]);

    LossGrad lg = loss_and_grad(result.params, batch, corpus.task,
                                derive_seed(cfg.seed, "dropout-iter", static_cast<std::uint64_t>(iter)));
    optimizer_step(result.params, lg.grads, opt, cfg.pretrain_lr);
    result.train_loss_trace.push_back(lg.loss);
    result.final_train_loss = lg.loss;
    result.iterations_run = iter + 1;

    if (cfg.early_stop && (iter + 1) % cfg.eval_interval == 0) {
      double val_loss = 0.0;
      std::size_t val_sets = 0;
      for (std::size_t m = 0; m < val_items.size(); ++m) {
        if (val_items[m].empty()) continue;
        val_loss += evaluate_loss(result.params, val_items[m], corpus.task);
        ++val_sets;
      }
      if (val_sets > 0) {
        val_loss /= static_cast<double>(val_sets);
        if (val_loss < best_val - 1e-12) {
          best_val = val_loss;
          evals_since_best = 0;
        } else if (++evals_since_best >= cfg.early_stop_patience) {
          break;
        }
      }
    }
  }
  result.best_val_loss = best_val;
  return result;
}

std::vector<Prediction> predict_direct(const ScorerParams& params, const MetaRepBuilder& reference,
                                       const RowMatrix& queries, int threads) {
  const std::size_t n = static_cast<std::size_t>(queries.rows());
  std::vector<MetaRep> reps(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const double* ptr = queries.row(static_cast<Eigen::Index>(i)).data();
    reps[i] = reference.build({ptr, static_cast<std::size_t>(queries.cols())});
  });

  std::vector<BatchItem> items(n);
  for (std::size_t i = 0; i < n; ++i) items[i].rep = &reps[i];

  // One shared forward over all blocks keeps the path identical for single
  // queries and batches.
  std::vector<Prediction> out(n);
  const auto& data = reference.data();
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> scores = class_scores(params, reps[i]);
    if (data.task == TaskKind::Classification) {
      out[i].class_id = predict_class(scores);
    } else {
      out[i].value = data.destandardize(scores[0]);
    }
  }
  return out;
}

Prediction predict_direct_one(const ScorerParams& params, const MetaRepBuilder& reference,
                              std::span<const double> query) {
  RowMatrix one(1, static_cast<Eigen::Index>(query.size()));
  for (std::size_t i = 0; i < query.size(); ++i) one(0, static_cast<Eigen::Index>(i)) = query[i];
  return predict_direct(params, reference, one, 1)[0];
}

ScorerParams finetune(const ScorerParams& params, const CorpusMember& downstream,
                      const TrainConfig& cfg) {
  cfg.validate();
  PreparedMember prep = prepare_member(downstream, cfg);

  ScorerParams current = params;
  OptimizerState opt = OptimizerState::for_params(current, cfg.optimizer);
  Rng loop_rng(derive_seed(cfg.seed, "finetune-loop"));

  const std::size_t n = prep.items.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::uint64_t step = 0;
  for (int epoch = 0; epoch < cfg.finetune_epochs; ++epoch) {
    loop_rng.shuffle(order);
    for (std::size_t at = 0; at < n; at += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(n, at + static_cast<std::size_t>(cfg.batch_size));
      std::vector<BatchItem> batch;
      batch.reserve(end - at);
      for (std::size_t i = at; i < end; ++i) batch.push_back(prep.items[order[i]]);
      LossGrad lg = loss_and_grad(current, batch, downstream.data.task,
                                  derive_seed(cfg.seed, "finetune-dropout", step++));
      optimizer_step(current, lg.grads, opt, cfg.finetune_lr, cfg.finetune_head_only);
    }
  }
  return current;
}

}  // namespace tabmeta
