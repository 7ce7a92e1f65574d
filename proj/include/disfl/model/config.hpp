// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace disfl {

struct ModelConfig {
  std::size_t layers = 12;
  std::size_t hidden = 768;
  std::size_t heads = 12;
  std::size_t intermediate = 3072;
  std::size_t vocab = 30522;
  std::size_t max_positions = 512;
  // 0 drops the segment table (DistilBERT shape).
  std::size_t segments = 2;
  std::size_t num_tags = 3;
  double dropout = 0.1;

  /// L x H with A heads, I = 4H and defaults elsewhere.
  static ModelConfig make(std::size_t layers, std::size_t hidden, std::size_t heads, std::size_t vocab);

  std::size_t head_dim() const noexcept { return hidden / heads; }
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Encoder parameters only; task heads are excluded.
std::uint64_t count_params(const ModelConfig& config);

std::string to_json(const ModelConfig& config);
ModelConfig config_from_json(std::string_view text);

/// Short label such as "12x128/v5000".
std::string describe(const ModelConfig& config);

}  // namespace disfl
