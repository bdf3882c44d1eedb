#pragma once

#include <cstdint>
#include <optional>

#include "tabmeta/metarep.hpp"
#include "tabmeta/rng.hpp"

namespace tabmeta {

// Shared scorer: a 3-hidden-layer MLP with a scalar head, applied per class
// block (classification) or once per instance (regression). The same
// parameters score every class block.
struct ScorerParams {
  struct Layer {
    Eigen::MatrixXd W;  // out x in
    Eigen::VectorXd b;  // out
  };
  std::vector<Layer> layers;  // hidden, hidden, hidden, head
  double dropout_rate = 0.1;
  int hidden_width = 256;
  int input_dim = 0;

  std::size_t parameter_count() const;
  bool same_shape(const ScorerParams& other) const;
};

ScorerParams init_params(int input_dim, int hidden_width, std::uint64_t seed, double dropout = 0.1);
ScorerParams zeros_like(const ScorerParams& params);

// Cached pre-activations and dropout masks for one forward pass in train mode.
struct ForwardTrace {
  RowMatrix input;
  std::vector<RowMatrix> pre_activations;  // per hidden layer
  std::vector<RowMatrix> masks;            // scaled inverted-dropout masks
  std::vector<RowMatrix> activations;      // post ReLU+dropout
};

// Scores a matrix of blocks (one per row). Train mode draws inverted-dropout
// masks from the rng; infer mode is deterministic and dropout-free.
Eigen::VectorXd forward_blocks(const ScorerParams& params, const RowMatrix& blocks, bool train,
                               Rng* dropout_rng = nullptr, ForwardTrace* trace = nullptr);

double score_block(const ScorerParams& params, std::span<const double> block);
double score_block_train(const ScorerParams& params, std::span<const double> block,
                         std::uint64_t dropout_seed, ForwardTrace* trace = nullptr);

// One score per class context, shared parameters across contexts.
std::vector<double> class_scores(const ScorerParams& params, const MetaRep& meta);

// Smallest index among maximal scores.
int predict_class(std::span<const double> scores);

struct BatchItem {
  const MetaRep* rep = nullptr;
  int label = 0;        // classification
  double target = 0.0;  // regression (standardized)
};

struct LossGrad {
  double loss = 0.0;
  ScorerParams grads;  // same shapes as the parameters
};

// Mean cross-entropy (classification) or mean squared error (regression) over
// the batch, with exact gradients via backpropagation. Class-block gradients
// accumulate into the shared parameters. dropout_seed drives the masks; pass
// train=false for a dropout-free evaluation (used by validation paths).
LossGrad loss_and_grad(const ScorerParams& params, std::span<const BatchItem> batch, TaskKind task,
                       std::uint64_t dropout_seed, bool train = true);

double evaluate_loss(const ScorerParams& params, std::span<const BatchItem> batch, TaskKind task);

enum class OptimizerKind { Adam, Sgd };

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Adam;
  double beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8;
  long step = 0;
  std::vector<ScorerParams::Layer> m, v;  // Adam moments, shaped like the params

  static OptimizerState for_params(const ScorerParams& params, OptimizerKind kind = OptimizerKind::Adam);
};

// In-place update. head_only restricts the update to the final linear layer.
void optimizer_step(ScorerParams& params, const ScorerParams& grads, OptimizerState& state,
                    double lr, bool head_only = false);

}  // namespace tabmeta
