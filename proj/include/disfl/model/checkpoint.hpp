// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disfl/aligned.hpp"
#include "disfl/model/config.hpp"
#include "disfl/model/param_layout.hpp"

namespace disfl {

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<float> data;

  std::size_t numel() const noexcept;
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

/// Per-row affine int8: value = (q - zero_point[r]) * scale[r].
struct QuantizedTensor {
  std::vector<std::size_t> shape;
  std::vector<std::int8_t> data;
  std::vector<float> scale;
  std::vector<std::int32_t> zero_point;

  std::size_t rows() const noexcept { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const noexcept;
  friend bool operator==(const QuantizedTensor&, const QuantizedTensor&) = default;
};

Tensor dequantize(const QuantizedTensor& q);

enum class Precision { Float32, Int8Quantized };
std::string_view to_string(Precision p);
Precision parse_precision(std::string_view text);

struct Checkpoint {
  ModelConfig config;
  Precision precision = Precision::Float32;
  // Digest of the vocabulary the model was trained with; empty if unknown.
  std::string vocab_digest;
  std::map<std::string, Tensor> tensors;
  // Int8Quantized only; names here are absent from `tensors`.
  std::map<std::string, QuantizedTensor> quantized;

  /// Throws MissingTensor or ShapeMismatch.
  void validate() const;
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// Truncated normal(0, 0.02) clipped at +-2 sigma for weights and embeddings,
/// zero biases, unit gamma. Each tensor draws from its own seeded stream.
Checkpoint init_checkpoint(const ModelConfig& config, std::uint64_t seed);

/// Element count over encoder tensors actually present, for cross-checking
/// count_params.
std::uint64_t encoder_param_count(const Checkpoint& ckpt);

/// Flat float buffer in ParamLayout order; int8 tensors are dequantized.
std::vector<float> flatten(const Checkpoint& ckpt);
Checkpoint from_flat(const ModelConfig& config, std::span<const float> params, std::string vocab_digest = {});

/// Content digest over config, precision and every tensor's bytes.
std::string checkpoint_digest(const Checkpoint& ckpt);

/// Compute-ready model: config, layout and one flat float buffer.
class Model {
 public:
  explicit Model(const Checkpoint& ckpt);
  Model(const ModelConfig& config, std::span<const float> params, std::string vocab_digest = {});

  const ModelConfig& config() const noexcept { return config_; }
  const ParamLayout& layout() const noexcept { return layout_; }
  std::span<const float> params() const noexcept { return params_; }
  std::span<float> mutable_params() noexcept { return params_; }
  const std::string& vocab_digest() const noexcept { return vocab_digest_; }

  Checkpoint to_checkpoint() const;

 private:
  ModelConfig config_;
  ParamLayout layout_;
  AlignedVector<float> params_;
  std::string vocab_digest_;
};

}  // namespace disfl
