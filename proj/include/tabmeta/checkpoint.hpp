#pragma once

#include <string>

#include "tabmeta/scorer.hpp"

namespace tabmeta {

// On-disk model format: "TBMK" magic, little-endian u32 header length, JSON
// header {format_version, task, K, kinds, input_dim, hidden_width, dropout},
// then each parameter tensor as raw little-endian float32 in declared order
// (W then b per layer, W row-major). Tensor lengths follow from the header.
struct Checkpoint {
  ScorerParams params;
  TaskKind task = TaskKind::Classification;
  int k = 0;
  std::vector<MetricSpec> kinds;  // kind + the weights recorded at save time
};

inline constexpr int kCheckpointFormatVersion = 1;

void save_checkpoint(const ScorerParams& params, const std::vector<MetricSpec>& specs,
                     TaskKind task, int k, const std::string& path);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace tabmeta
