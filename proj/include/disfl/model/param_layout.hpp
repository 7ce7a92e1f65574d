// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "disfl/model/config.hpp"

namespace disfl {

enum class ParamKind { Matrix, Embedding, Bias, Norm };

struct ParamSlot {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t offset = 0;
  std::size_t size = 0;
  ParamKind kind = ParamKind::Matrix;
  // Task heads (classifier, MLM, NSP) are not counted as encoder parameters.
  bool head = false;

  bool decays() const noexcept { return kind == ParamKind::Matrix || kind == ParamKind::Embedding; }
  bool quantizable() const noexcept { return !head && decays(); }
};

/// Fixed ordering of every named tensor within one flat parameter buffer.
/// Linear weights are stored [out, in].
class ParamLayout {
 public:
  explicit ParamLayout(const ModelConfig& config);

  const std::vector<ParamSlot>& slots() const noexcept { return slots_; }
  std::size_t total() const noexcept { return total_; }
  std::size_t encoder_total() const noexcept { return encoder_total_; }
  const ParamSlot& at(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  struct Layer {
    std::size_t q_w, q_b, k_w, k_b, v_w, v_b, o_w, o_b, attn_g, attn_b;
    std::size_t ffn_in_w, ffn_in_b, ffn_out_w, ffn_out_b, ffn_g, ffn_b;
  };
  // Offsets into the flat buffer, resolved once.
  std::size_t tok, pos, seg, emb_g, emb_b;
  std::vector<Layer> layers;
  std::size_t cls_w, cls_b, mlm_w, mlm_b, mlm_g, mlm_beta, mlm_out_b, nsp_w, nsp_b;

 private:
  std::size_t add(std::string name, std::vector<std::size_t> shape, ParamKind kind, bool head);

  std::vector<ParamSlot> slots_;
  std::size_t total_ = 0;
  std::size_t encoder_total_ = 0;
};

}  // namespace disfl
