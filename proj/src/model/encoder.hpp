// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

// Forward and backward passes of the post-LayerNorm encoder and its heads.
// Instantiated for float (training, inference) and double (gradient checks).

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "disfl/aligned.hpp"
#include "disfl/model/config.hpp"
#include "disfl/model/param_layout.hpp"
#include "disfl/rng.hpp"
#include "disfl/tokenizer/encode.hpp"

namespace disfl::detail {

inline constexpr double kLayerNormEps = 1e-12;

template <class T>
using Buffer = AlignedVector<T>;

template <class T>
struct NormCache {
  Buffer<T> xhat;
  Buffer<T> rstd;
};

/// y = gamma * (x - mean) / sqrt(var + eps) + beta, row-wise over `cols`.
/// Statistics are accumulated in double.
template <class T>
void layer_norm_forward(const T* x, std::size_t rows, std::size_t cols, const T* gamma, const T* beta, T* y,
                        NormCache<T>& cache);

/// dx = d/dx given dy; accumulates dgamma and dbeta.
template <class T>
void layer_norm_backward(const T* dy, std::size_t rows, std::size_t cols, const T* gamma, const NormCache<T>& cache,
                         T* dx, T* dgamma, T* dbeta);

template <class T>
T gelu(T x);
template <class T>
T gelu_grad(T x);

template <class T>
class Encoder {
 public:
  Encoder(const ModelConfig& config, const ParamLayout& layout, const T* params);

  /// Embeddings and all blocks. With `rng` set and dropout > 0, dropout masks
  /// are sampled (training mode); otherwise the pass is deterministic.
  void run(const Batch& batch, Rng* rng);

  /// [batch * length, hidden]
  const Buffer<T>& hidden() const noexcept { return hidden_; }
  /// [batch, heads, length, length] for one layer.
  const Buffer<T>& attention(std::size_t layer) const { return layers_.at(layer).probs; }

  /// [batch * length, num_tags]; dropout on the classifier input in training.
  void classify(Buffer<T>& logits);
  /// [positions, vocab] at flat indices b * length + t.
  void mlm(std::span<const std::size_t> positions, Buffer<T>& logits);
  /// [batch, 2] from position 0 of each row.
  void nsp(Buffer<T>& logits);

  /// Back-propagates head gradients (any may be null when that head was not
  /// run) and accumulates parameter gradients into `grad` (layout.total(),
  /// kBufferAlignment-aligned).
  void backward(const T* d_cls, const T* d_mlm, const T* d_nsp, T* grad);

 private:
  struct LayerCache {
    Buffer<T> x_in, q, k, v, probs, ctx, attn_drop;
    NormCache<T> ln1;
    Buffer<T> x1, u, g, ffn_drop;
    NormCache<T> ln2;
  };

  void dropout_mask(Buffer<T>& mask, std::size_t n);
  void attention_forward(LayerCache& c, T* ctx);
  void attention_backward(const LayerCache& c, const T* d_ctx, T* dq, T* dk, T* dv) const;

  const ModelConfig& config_;
  const ParamLayout& layout_;
  const T* p_;
  Rng* rng_ = nullptr;
  std::size_t B_ = 0, S_ = 0, N_ = 0;
  std::vector<TokenId> ids_, segs_;
  std::vector<std::uint8_t> mask_;

  NormCache<T> emb_ln_;
  Buffer<T> emb_drop_;
  std::vector<LayerCache> layers_;
  Buffer<T> hidden_;

  Buffer<T> cls_drop_;
  Buffer<T> cls_in_;
  std::vector<std::size_t> mlm_pos_;
  Buffer<T> mlm_in_, mlm_pre_, mlm_act_, mlm_z_;
  NormCache<T> mlm_ln_;
};

extern template class Encoder<float>;
extern template class Encoder<double>;

}  // namespace disfl::detail
