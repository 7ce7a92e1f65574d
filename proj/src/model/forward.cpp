// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/model/forward.hpp"

#include "disfl/error.hpp"
#include "model/encoder.hpp"

namespace disfl {

void check_batch(const ModelConfig& config, const Batch& batch) {
  const std::size_t n = batch.positions();
  if (batch.ids.size() != n || batch.segments.size() != n || batch.mask.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "batch arrays do not match batch x length");
  }
  if (batch.length > config.max_positions) {
    throw Error(ErrorCode::ShapeMismatch, "sequence length " + std::to_string(batch.length) + " exceeds max_positions " +
                                              std::to_string(config.max_positions));
  }
  if (batch.batch > 0 && batch.length == 0) throw Error(ErrorCode::ShapeMismatch, "empty sequences in batch");
  for (std::size_t b = 0; b < batch.batch; ++b) {
    if (batch.mask[b * batch.length] == 0) throw Error(ErrorCode::ShapeMismatch, "sequence starts with padding");
  }
  const std::size_t seg_limit = config.segments == 0 ? 1 : config.segments;
  for (std::size_t i = 0; i < n; ++i) {
    if (batch.ids[i] < 0 || static_cast<std::size_t>(batch.ids[i]) >= config.vocab) {
      throw Error(ErrorCode::IdOutOfRange, "token id " + std::to_string(batch.ids[i]) + " outside vocab of " +
                                               std::to_string(config.vocab));
    }
    if (batch.segments[i] < 0 || static_cast<std::size_t>(batch.segments[i]) >= seg_limit) {
      throw Error(ErrorCode::IdOutOfRange, "segment id " + std::to_string(batch.segments[i]) + " out of range");
    }
  }
}

namespace {

Logits to_logits(const detail::Buffer<float>& v, std::size_t rows, std::size_t cols) {
  Logits l;
  l.rows = rows;
  l.cols = cols;
  l.values.assign(v.begin(), v.end());
  return l;
}

}  // namespace

Logits forward(const Model& model, const Batch& batch) {
  check_batch(model.config(), batch);
  detail::Encoder<float> enc(model.config(), model.layout(), model.params().data());
  enc.run(batch, nullptr);
  detail::Buffer<float> out;
  enc.classify(out);
  return to_logits(out, batch.positions(), model.config().num_tags);
}

Logits forward(const Checkpoint& ckpt, const Batch& batch) { return forward(Model(ckpt), batch); }

MlmNspLogits forward_mlm_nsp(const Model& model, const Batch& batch, std::span<const std::size_t> masked_positions) {
  check_batch(model.config(), batch);
  for (std::size_t p : masked_positions) {
    if (p >= batch.positions()) throw Error(ErrorCode::ShapeMismatch, "masked position out of range");
    if (batch.mask[p] == 0) throw Error(ErrorCode::InvalidArgument, "masked position is padding");
  }
  detail::Encoder<float> enc(model.config(), model.layout(), model.params().data());
  enc.run(batch, nullptr);
  MlmNspLogits out;
  detail::Buffer<float> mlm, nsp;
  enc.mlm(masked_positions, mlm);
  enc.nsp(nsp);
  out.mlm = to_logits(mlm, masked_positions.size(), model.config().vocab);
  out.nsp = to_logits(nsp, batch.batch, 2);
  return out;
}

std::vector<float> attention_probabilities(const Model& model, const Batch& batch, std::size_t layer) {
  check_batch(model.config(), batch);
  if (layer >= model.config().layers) throw Error(ErrorCode::InvalidArgument, "layer index out of range");
  detail::Encoder<float> enc(model.config(), model.layout(), model.params().data());
  enc.run(batch, nullptr);
  const auto& probs = enc.attention(layer);
  return {probs.begin(), probs.end()};
}

}  // namespace disfl
