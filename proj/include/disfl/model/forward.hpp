// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "disfl/model/checkpoint.hpp"
#include "disfl/tokenizer/encode.hpp"

namespace disfl {

/// Row-major [rows, cols] matrix of scores.
struct Logits {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;

  float at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const float> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

/// Throws ShapeMismatch for inconsistent batch arrays or length above
/// max_positions, IdOutOfRange for token or segment ids outside the tables.
void check_batch(const ModelConfig& config, const Batch& batch);

/// Per-token tag logits, [batch * length, num_tags]. Eval mode (no dropout).
Logits forward(const Model& model, const Batch& batch);
Logits forward(const Checkpoint& ckpt, const Batch& batch);

struct MlmNspLogits {
  Logits mlm;  // [positions, vocab]
  Logits nsp;  // [batch, 2]
};

/// `masked_positions` are flat indices b * length + t of non-PAD positions.
MlmNspLogits forward_mlm_nsp(const Model& model, const Batch& batch, std::span<const std::size_t> masked_positions);

/// Attention probabilities of one layer, [batch, heads, length, length].
std::vector<float> attention_probabilities(const Model& model, const Batch& batch, std::size_t layer);

}  // namespace disfl
