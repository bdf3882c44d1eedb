#include "tabmeta/scorer.hpp"

#include <cmath>

namespace tabmeta {

std::size_t ScorerParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.W.size()) + l.b.size();
  return n;
}

bool ScorerParams::same_shape(const ScorerParams& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].W.rows() != other.layers[i].W.rows() ||
        layers[i].W.cols() != other.layers[i].W.cols() ||
        layers[i].b.size() != other.layers[i].b.size()) {
      return false;
    }
  }
  return true;
}

ScorerParams init_params(int input_dim, int hidden_width, std::uint64_t seed, double dropout) {
  if (input_dim < 1 || hidden_width < 1) {
    throw Error(ErrorCode::ShapeMismatch, "init_params needs positive dimensions");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw Error(ErrorCode::ConfigError, "dropout rate must lie in [0, 1)");
  }
  ScorerParams p;
  p.input_dim = input_dim;
  p.hidden_width = hidden_width;
  p.dropout_rate = dropout;

  Rng rng(derive_seed(seed, "scorer-init"));
  const int dims[5] = {input_dim, hidden_width, hidden_width, hidden_width, 1};
  for (int l = 0; l < 4; ++l) {
    const int fan_in = dims[l], fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    ScorerParams::Layer layer;
    layer.W.resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < layer.W.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.W.cols(); ++c) {
        layer.W(r, c) = rng.uniform_in(-bound, bound);
      }
    }
    layer.b = Eigen::VectorXd::Zero(fan_out);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

ScorerParams zeros_like(const ScorerParams& params) {
  ScorerParams g = params;
  for (auto& l : g.layers) {
    l.W.setZero();
    l.b.setZero();
  }
  return g;
}

Eigen::VectorXd forward_blocks(const ScorerParams& params, const RowMatrix& blocks, bool train,
                               Rng* dropout_rng, ForwardTrace* trace) {
  if (blocks.cols() != params.input_dim) {
    throw Error(ErrorCode::ShapeMismatch,
                "block width " + std::to_string(blocks.cols()) + " != input_dim " +
                    std::to_string(params.input_dim));
  }
  const double rate = params.dropout_rate;
  const bool use_dropout = train && rate > 0.0;
  if (use_dropout && dropout_rng == nullptr) {
    throw Error(ErrorCode::ConfigError, "train-mode forward needs a dropout rng");
  }
  if (trace) {
    trace->input = blocks;
    trace->pre_activations.clear();
    trace->masks.clear();
    trace->activations.clear();
  }

  RowMatrix a = blocks;
  const std::size_t hidden_layers = params.layers.size() - 1;
  for (std::size_t l = 0; l < hidden_layers; ++l) {
    RowMatrix z = (a * params.layers[l].W.transpose()).rowwise() + params.layers[l].b.transpose();
    if (trace) trace->pre_activations.push_back(z);
    RowMatrix act = z.cwiseMax(0.0);
    if (use_dropout) {
      const double keep_scale = 1.0 / (1.0 - rate);
      RowMatrix mask(z.rows(), z.cols());
      for (Eigen::Index r = 0; r < mask.rows(); ++r) {
        for (Eigen::Index c = 0; c < mask.cols(); ++c) {
          mask(r, c) = dropout_rng->uniform() < rate ? 0.0 : keep_scale;
        }
      }
      act = act.cwiseProduct(mask);
      if (trace) trace->masks.push_back(std::move(mask));
    } else if (trace) {
      trace->masks.emplace_back();  // empty marks "no dropout"
    }
    if (trace) trace->activations.push_back(act);
    a = std::move(act);
  }
  Eigen::VectorXd scores =
      a * params.layers.back().W.transpose().col(0) +
      Eigen::VectorXd::Constant(a.rows(), params.layers.back().b(0));
  return scores;
}

double score_block(const ScorerParams& params, std::span<const double> block) {
  RowMatrix one(1, static_cast<Eigen::Index>(block.size()));
  for (std::size_t i = 0; i < block.size(); ++i) one(0, static_cast<Eigen::Index>(i)) = block[i];
  return forward_blocks(params, one, /*train=*/false)(0);
}

double score_block_train(const ScorerParams& params, std::span<const double> block,
                         std::uint64_t dropout_seed, ForwardTrace* trace) {
  RowMatrix one(1, static_cast<Eigen::Index>(block.size()));
  for (std::size_t i = 0; i < block.size(); ++i) one(0, static_cast<Eigen::Index>(i)) = block[i];
  Rng rng(derive_seed(dropout_seed, "dropout"));
  return forward_blocks(params, one, /*train=*/true, &rng, trace)(0);
}

std::vector<double> class_scores(const ScorerParams& params, const MetaRep& meta) {
  RowMatrix blocks(meta.contexts, meta.block_len());
  for (int c = 0; c < meta.contexts; ++c) {
    const auto block = meta.context_block(c);
    for (int i = 0; i < meta.block_len(); ++i) blocks(c, i) = block[i];
  }
  const Eigen::VectorXd s = forward_blocks(params, blocks, /*train=*/false);
  return {s.data(), s.data() + s.size()};
}

int predict_class(std::span<const double> scores) {
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = static_cast<int>(c);
  }
  return best;
}

namespace {

struct AssembledBatch {
  RowMatrix blocks;               // total block rows x input_dim
  std::vector<int> offsets;       // per instance: first block row
  std::vector<int> block_counts;  // per instance: context count
};

AssembledBatch assemble(std::span<const BatchItem> batch, int input_dim) {
  Eigen::Index rows = 0;
  for (const auto& item : batch) rows += item.rep->contexts;
  AssembledBatch out;
  out.blocks.resize(rows, input_dim);
  Eigen::Index at = 0;
  for (const auto& item : batch) {
    if (item.rep->block_len() != input_dim) {
      throw Error(ErrorCode::ShapeMismatch, "meta-representation width does not match scorer input");
    }
    out.offsets.push_back(static_cast<int>(at));
    out.block_counts.push_back(item.rep->contexts);
    for (int c = 0; c < item.rep->contexts; ++c, ++at) {
      const auto block = item.rep->context_block(c);
      for (int i = 0; i < input_dim; ++i) out.blocks(at, i) = block[i];
    }
  }
  return out;
}

}  // namespace

LossGrad loss_and_grad(const ScorerParams& params, std::span<const BatchItem> batch, TaskKind task,
                       std::uint64_t dropout_seed, bool train) {
  if (batch.empty()) throw Error(ErrorCode::EmptyContext, "loss over an empty batch");
  const AssembledBatch ab = assemble(batch, params.input_dim);

  Rng rng(derive_seed(dropout_seed, "dropout"));
  ForwardTrace trace;
  const Eigen::VectorXd scores = forward_blocks(params, ab.blocks, train, &rng, &trace);

  const double inv_b = 1.0 / static_cast<double>(batch.size());
  Eigen::VectorXd dscore = Eigen::VectorXd::Zero(scores.size());
  double loss = 0.0;

  if (task == TaskKind::Classification) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const int off = ab.offsets[i];
      const int c_count = ab.block_counts[i];
      const int y = batch[i].label;
      if (y < 0 || y >= c_count) throw Error(ErrorCode::ShapeMismatch, "label outside class range");
      // stable log-softmax
      double mx = scores(off);
      for (int c = 1; c < c_count; ++c) mx = std::max(mx, scores(off + c));
      double sum = 0.0;
      for (int c = 0; c < c_count; ++c) sum += std::exp(scores(off + c) - mx);
      const double logz = mx + std::log(sum);
      loss += (logz - scores(off + y)) * inv_b;
      for (int c = 0; c < c_count; ++c) {
        const double p = std::exp(scores(off + c) - logz);
        dscore(off + c) = (p - (c == y ? 1.0 : 0.0)) * inv_b;
      }
    }
  } else {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const int off = ab.offsets[i];
      const double err = scores(off) - batch[i].target;
      loss += err * err * inv_b;
      dscore(off) = 2.0 * err * inv_b;
    }
  }

  // Backward pass. Head first, then the hidden stack in reverse.
  LossGrad out;
  out.loss = loss;
  out.grads = zeros_like(params);

  const std::size_t hidden_layers = params.layers.size() - 1;
  const RowMatrix& last_act = hidden_layers > 0 ? trace.activations.back() : trace.input;

  out.grads.layers.back().W = (dscore.transpose() * last_act);  // 1 x hidden
  out.grads.layers.back().b(0) = dscore.sum();

  RowMatrix delta = dscore * params.layers.back().W;  // rows x hidden
  for (std::size_t l = hidden_layers; l-- > 0;) {
    const RowMatrix& z = trace.pre_activations[l];
    const RowMatrix& mask = trace.masks[l];
    RowMatrix local = delta;
    if (mask.size() > 0) local = local.cwiseProduct(mask);
    local = local.cwiseProduct((z.array() > 0.0).cast<double>().matrix());

    const RowMatrix& below = l > 0 ? trace.activations[l - 1] : trace.input;
    out.grads.layers[l].W = local.transpose() * below;
    out.grads.layers[l].b = local.colwise().sum().transpose();
    if (l > 0) delta = local * params.layers[l].W;
  }
  return out;
}

double evaluate_loss(const ScorerParams& params, std::span<const BatchItem> batch, TaskKind task) {
  return loss_and_grad(params, batch, task, /*dropout_seed=*/0, /*train=*/false).loss;
}

OptimizerState OptimizerState::for_params(const ScorerParams& params, OptimizerKind kind) {
  OptimizerState s;
  s.kind = kind;
  for (const auto& l : params.layers) {
    ScorerParams::Layer zero;
    zero.W = Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols());
    zero.b = Eigen::VectorXd::Zero(l.b.size());
    s.m.push_back(zero);
    s.v.push_back(std::move(zero));
  }
  return s;
}

void optimizer_step(ScorerParams& params, const ScorerParams& grads, OptimizerState& state,
                    double lr, bool head_only) {
  if (!params.same_shape(grads)) {
    throw Error(ErrorCode::ShapeMismatch, "gradient shapes do not match parameters");
  }
  state.step += 1;
  const std::size_t first = head_only ? params.layers.size() - 1 : 0;

  if (state.kind == OptimizerKind::Sgd) {
    for (std::size_t l = first; l < params.layers.size(); ++l) {
      params.layers[l].W -= lr * grads.layers[l].W;
      params.layers[l].b -= lr * grads.layers[l].b;
    }
    return;
  }

  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = first; l < params.layers.size(); ++l) {
    auto& m = state.m[l];
    auto& v = state.v[l];
    const auto& g = grads.layers[l];
    m.W = state.beta1 * m.W + (1.0 - state.beta1) * g.W;
    m.b = state.beta1 * m.b + (1.0 - state.beta1) * g.b;
    v.W = state.beta2 * v.W + (1.0 - state.beta2) * g.W.cwiseProduct(g.W);
    v.b = state.beta2 * v.b + (1.0 - state.beta2) * g.b.cwiseProduct(g.b);

    params.layers[l].W.array() -=
        lr * (m.W.array() / bc1) / ((v.W.array() / bc2).sqrt() + state.epsilon);
    params.layers[l].b.array() -=
        lr * (m.b.array() / bc1) / ((v.b.array() / bc2).sqrt() + state.epsilon);
  }
}

}  // namespace tabmeta
