// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "model/encoder.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

namespace disfl::detail {

namespace {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class T>
using Map = Eigen::Map<Mat<T>>;
template <class T>
using CMap = Eigen::Map<const Mat<T>>;
template <class T>
using RowVec = Eigen::Matrix<T, 1, Eigen::Dynamic>;

using Index = Eigen::Index;

Index ix(std::size_t v) { return static_cast<Index>(v); }

// y[n, out] = x[n, in] * W[out, in]^T + b
template <class T>
void linear(const T* x, std::size_t n, std::size_t in, const T* w, const T* b, std::size_t out, T* y) {
  Map<T> Y(y, ix(n), ix(out));
  Y.noalias() = CMap<T>(x, ix(n), ix(in)) * CMap<T>(w, ix(out), ix(in)).transpose();
  Y.rowwise() += Eigen::Map<const RowVec<T>>(b, ix(out));
}

// Accumulates dW += dy^T x and db += colsum(dy); writes (or adds) dx = dy W.
template <class T>
void linear_backward(const T* x, const T* dy, std::size_t n, std::size_t in, std::size_t out, const T* w, T* dw, T* db,
                     T* dx, bool accumulate_dx) {
  CMap<T> DY(dy, ix(n), ix(out));
  CMap<T> X(x, ix(n), ix(in));
  Map<T>(dw, ix(out), ix(in)).noalias() += DY.transpose() * X;
  Eigen::Map<RowVec<T>>(db, ix(out)) += DY.colwise().sum();
  if (dx != nullptr) {
    Map<T> DX(dx, ix(n), ix(in));
    if (accumulate_dx) {
      DX.noalias() += DY * CMap<T>(w, ix(out), ix(in));
    } else {
      DX.noalias() = DY * CMap<T>(w, ix(out), ix(in));
    }
  }
}

template <class T>
void apply_mask(Buffer<T>& x, const Buffer<T>& mask) {
  if (mask.empty()) return;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= mask[i];
}

}  // namespace

template <class T>
void layer_norm_forward(const T* x, std::size_t rows, std::size_t cols, const T* gamma, const T* beta, T* y,
                        NormCache<T>& cache) {
  cache.xhat.resize(rows * cols);
  cache.rstd.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = x + r * cols;
    double mean = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mean += static_cast<double>(xr[c]);
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double d = static_cast<double>(xr[c]) - mean;
      var += d * d;
    }
    var /= static_cast<double>(cols);
    const double rstd = 1.0 / std::sqrt(var + kLayerNormEps);
    cache.rstd[r] = static_cast<T>(rstd);
    T* xh = cache.xhat.data() + r * cols;
    T* yr = y + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      xh[c] = static_cast<T>((static_cast<double>(xr[c]) - mean) * rstd);
      yr[c] = gamma[c] * xh[c] + beta[c];
    }
  }
}

template <class T>
void layer_norm_backward(const T* dy, std::size_t rows, std::size_t cols, const T* gamma, const NormCache<T>& cache,
                         T* dx, T* dgamma, T* dbeta) {
  Buffer<T> dxhat(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* dyr = dy + r * cols;
    const T* xh = cache.xhat.data() + r * cols;
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      dxhat[c] = dyr[c] * gamma[c];
      m1 += static_cast<double>(dxhat[c]);
      m2 += static_cast<double>(dxhat[c]) * static_cast<double>(xh[c]);
      dgamma[c] += dyr[c] * xh[c];
      dbeta[c] += dyr[c];
    }
    m1 /= static_cast<double>(cols);
    m2 /= static_cast<double>(cols);
    const double rstd = static_cast<double>(cache.rstd[r]);
    T* dxr = dx + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      dxr[c] = static_cast<T>(rstd * (static_cast<double>(dxhat[c]) - m1 - static_cast<double>(xh[c]) * m2));
    }
  }
}

namespace {
constexpr double kSqrt2OverPi = 0.79788456080286535587989211986876;
constexpr double kGeluCubic = 0.044715;
}  // namespace

template <class T>
T gelu(T x) {
  const T u = static_cast<T>(kSqrt2OverPi) * (x + static_cast<T>(kGeluCubic) * x * x * x);
  return static_cast<T>(0.5) * x * (static_cast<T>(1) + std::tanh(u));
}

template <class T>
T gelu_grad(T x) {
  const T u = static_cast<T>(kSqrt2OverPi) * (x + static_cast<T>(kGeluCubic) * x * x * x);
  const T th = std::tanh(u);
  const T du = static_cast<T>(kSqrt2OverPi) * (static_cast<T>(1) + static_cast<T>(3 * kGeluCubic) * x * x);
  return static_cast<T>(0.5) * (static_cast<T>(1) + th) + static_cast<T>(0.5) * x * (static_cast<T>(1) - th * th) * du;
}

template <class T>
Encoder<T>::Encoder(const ModelConfig& config, const ParamLayout& layout, const T* params)
    : config_(config), layout_(layout), p_(params) {}

template <class T>
void Encoder<T>::dropout_mask(Buffer<T>& mask, std::size_t n) {
  mask.clear();
  if (rng_ == nullptr || config_.dropout <= 0.0) return;
  const double keep = 1.0 - config_.dropout;
  const T scale = static_cast<T>(1.0 / keep);
  mask.resize(n);
  for (auto& m : mask) m = rng_->uniform() < keep ? scale : T(0);
}

template <class T>
void Encoder<T>::run(const Batch& batch, Rng* rng) {
  rng_ = rng;
  B_ = batch.batch;
  S_ = batch.length;
  N_ = B_ * S_;
  ids_ = batch.ids;
  segs_ = batch.segments;
  mask_ = batch.mask;
  const std::size_t H = config_.hidden;

  Buffer<T> e(N_ * H);
  for (std::size_t n = 0; n < N_; ++n) {
    const std::size_t t = n % S_;
    const T* tok = p_ + layout_.tok + static_cast<std::size_t>(ids_[n]) * H;
    const T* pos = p_ + layout_.pos + t * H;
    T* row = e.data() + n * H;
    for (std::size_t h = 0; h < H; ++h) row[h] = tok[h] + pos[h];
    if (config_.segments > 0) {
      const T* seg = p_ + layout_.seg + static_cast<std::size_t>(segs_[n]) * H;
      for (std::size_t h = 0; h < H; ++h) row[h] += seg[h];
    }
  }
  hidden_.resize(N_ * H);
  layer_norm_forward(e.data(), N_, H, p_ + layout_.emb_g, p_ + layout_.emb_b, hidden_.data(), emb_ln_);
  dropout_mask(emb_drop_, N_ * H);
  apply_mask(hidden_, emb_drop_);

  const std::size_t I = config_.intermediate;
  layers_.resize(config_.layers);
  for (std::size_t l = 0; l < config_.layers; ++l) {
    const auto& L = layout_.layers[l];
    LayerCache& c = layers_[l];
    c.x_in = hidden_;
    c.q.resize(N_ * H);
    c.k.resize(N_ * H);
    c.v.resize(N_ * H);
    linear(c.x_in.data(), N_, H, p_ + L.q_w, p_ + L.q_b, H, c.q.data());
    linear(c.x_in.data(), N_, H, p_ + L.k_w, p_ + L.k_b, H, c.k.data());
    linear(c.x_in.data(), N_, H, p_ + L.v_w, p_ + L.v_b, H, c.v.data());
    c.ctx.resize(N_ * H);
    attention_forward(c, c.ctx.data());

    Buffer<T> a(N_ * H);
    linear(c.ctx.data(), N_, H, p_ + L.o_w, p_ + L.o_b, H, a.data());
    dropout_mask(c.attn_drop, N_ * H);
    apply_mask(a, c.attn_drop);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += c.x_in[i];
    c.x1.resize(N_ * H);
    layer_norm_forward(a.data(), N_, H, p_ + L.attn_g, p_ + L.attn_b, c.x1.data(), c.ln1);

    c.u.resize(N_ * I);
    linear(c.x1.data(), N_, H, p_ + L.ffn_in_w, p_ + L.ffn_in_b, I, c.u.data());
    c.g.resize(N_ * I);
    for (std::size_t i = 0; i < c.u.size(); ++i) c.g[i] = gelu(c.u[i]);
    Buffer<T> f(N_ * H);
    linear(c.g.data(), N_, I, p_ + L.ffn_out_w, p_ + L.ffn_out_b, H, f.data());
    dropout_mask(c.ffn_drop, N_ * H);
    apply_mask(f, c.ffn_drop);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += c.x1[i];
    layer_norm_forward(f.data(), N_, H, p_ + L.ffn_g, p_ + L.ffn_b, hidden_.data(), c.ln2);
  }
}

template <class T>
void Encoder<T>::attention_forward(LayerCache& c, T* ctx) {
  const std::size_t H = config_.hidden, A = config_.heads, d = config_.head_dim();
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d)));
  const T neg_inf = -std::numeric_limits<T>::infinity();
  c.probs.assign(B_ * A * S_ * S_, T(0));
  CMap<T> Q(c.q.data(), ix(N_), ix(H));
  CMap<T> K(c.k.data(), ix(N_), ix(H));
  CMap<T> V(c.v.data(), ix(N_), ix(H));
  Map<T> C(ctx, ix(N_), ix(H));
  for (std::size_t b = 0; b < B_; ++b) {
    for (std::size_t a = 0; a < A; ++a) {
      Map<T> P(c.probs.data() + (b * A + a) * S_ * S_, ix(S_), ix(S_));
      const auto Qb = Q.block(ix(b * S_), ix(a * d), ix(S_), ix(d));
      const auto Kb = K.block(ix(b * S_), ix(a * d), ix(S_), ix(d));
      const auto Vb = V.block(ix(b * S_), ix(a * d), ix(S_), ix(d));
      P.noalias() = (Qb * Kb.transpose()) * scale;
      for (std::size_t j = 0; j < S_; ++j) {
        if (mask_[b * S_ + j] == 0) P.col(ix(j)).setConstant(neg_inf);
      }
      for (Index i = 0; i < P.rows(); ++i) {
        auto row = P.row(i);
        const T mx = row.maxCoeff();
        row = (row.array() - mx).exp();
        row /= row.sum();
      }
      C.block(ix(b * S_), ix(a * d), ix(S_), ix(d)).noalias() = P * Vb;
    }
  }
}

template <class T>
void Encoder<T>::attention_backward(const LayerCache& c, const T* d_ctx, T* dq, T* dk, T* dv) const {
  const std::size_t H = config_.hidden, A = config_.heads, d = config_.head_dim();
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d)));
  CMap<T> Q(c.q.data(), ix(N_), ix(H));
  CMap<T> K(c.k.data(), ix(N_), ix(H));
  CMap<T> V(c.v.data(), ix(N_), ix(H));
  CMap<T> DC(d_ctx, ix(N_), ix(H));
  Map<T> DQ(dq, ix(N_), ix(H));
  Map<T> DK(dk, ix(N_), ix(H));
  Map<T> DV(dv, ix(N_), ix(H));
  Mat<T> dP(ix(S_), ix(S_));
  for (std::size_t b = 0; b < B_; ++b) {
    for (std::size_t a = 0; a < A; ++a) {
      CMap<T> P(c.probs.data() + (b * A + a) * S_ * S_, ix(S_), ix(S_));
      const auto dCb = DC.block(ix(b * S_), ix(a * d), ix(S_), ix(d));
      DV.block(ix(b * S_), ix(a * d), ix(S_), ix(d)).noalias() = P.transpose() * dCb;
      dP.noalias() = dCb * V.block(ix(b * S_), ix(a * d), ix(S_), ix(d)).transpose();
      // Softmax Jacobian: dS = P * (dP - rowsum(dP * P)).
      for (Index i = 0; i < dP.rows(); ++i) {
        const T dot = (dP.row(i).array() * P.row(i).array()).sum();
        dP.row(i) = (P.row(i).array() * (dP.row(i).array() - dot)) * scale;
      }
      DQ.block(ix(b * S_), ix(a * d), ix(S_), ix(d)).noalias() = dP * K.block(ix(b * S_), ix(a * d), ix(S_), ix(d));
      DK.block(ix(b * S_), ix(a * d), ix(S_), ix(d)).noalias() =
          dP.transpose() * Q.block(ix(b * S_), ix(a * d), ix(S_), ix(d));
    }
  }
}

template <class T>
void Encoder<T>::classify(Buffer<T>& logits) {
  const std::size_t H = config_.hidden, C = config_.num_tags;
  cls_in_ = hidden_;
  dropout_mask(cls_drop_, N_ * H);
  apply_mask(cls_in_, cls_drop_);
  logits.resize(N_ * C);
  linear(cls_in_.data(), N_, H, p_ + layout_.cls_w, p_ + layout_.cls_b, C, logits.data());
}

template <class T>
void Encoder<T>::mlm(std::span<const std::size_t> positions, Buffer<T>& logits) {
  const std::size_t H = config_.hidden, V = config_.vocab, M = positions.size();
  mlm_pos_.assign(positions.begin(), positions.end());
  mlm_in_.resize(M * H);
  for (std::size_t m = 0; m < M; ++m) {
    std::copy_n(hidden_.data() + mlm_pos_[m] * H, H, mlm_in_.data() + m * H);
  }
  mlm_pre_.resize(M * H);
  logits.assign(M * V, T(0));
  if (M == 0) return;
  linear(mlm_in_.data(), M, H, p_ + layout_.mlm_w, p_ + layout_.mlm_b, H, mlm_pre_.data());
  mlm_act_.resize(M * H);
  for (std::size_t i = 0; i < mlm_pre_.size(); ++i) mlm_act_[i] = gelu(mlm_pre_[i]);
  mlm_z_.resize(M * H);
  layer_norm_forward(mlm_act_.data(), M, H, p_ + layout_.mlm_g, p_ + layout_.mlm_beta, mlm_z_.data(), mlm_ln_);
  // Output projection is tied to the token embedding table.
  linear(mlm_z_.data(), M, H, p_ + layout_.tok, p_ + layout_.mlm_out_b, V, logits.data());
}

template <class T>
void Encoder<T>::nsp(Buffer<T>& logits) {
  const std::size_t H = config_.hidden;
  Buffer<T> first(B_ * H);
  for (std::size_t b = 0; b < B_; ++b) std::copy_n(hidden_.data() + b * S_ * H, H, first.data() + b * H);
  logits.resize(B_ * 2);
  linear(first.data(), B_, H, p_ + layout_.nsp_w, p_ + layout_.nsp_b, 2, logits.data());
}

template <class T>
void Encoder<T>::backward(const T* d_cls_in, const T* d_mlm_in, const T* d_nsp_in, T* grad) {
  const std::size_t H = config_.hidden, I = config_.intermediate;
  Buffer<T> dh(N_ * H, T(0));
  // Head gradients come from callers' buffers; aligned copies keep the
  // kernels on a fixed code path.
  Buffer<T> d_cls_buf, d_mlm_buf, d_nsp_buf;
  auto aligned = [](const T* src, std::size_t n, Buffer<T>& buf) -> const T* {
    if (src == nullptr) return nullptr;
    buf.assign(src, src + n);
    return buf.data();
  };
  const T* d_cls = aligned(d_cls_in, N_ * config_.num_tags, d_cls_buf);
  const T* d_mlm = aligned(d_mlm_in, mlm_pos_.size() * config_.vocab, d_mlm_buf);
  const T* d_nsp = aligned(d_nsp_in, B_ * 2, d_nsp_buf);

  if (d_cls != nullptr) {
    Buffer<T> dx(N_ * H);
    linear_backward(cls_in_.data(), d_cls, N_, H, config_.num_tags, p_ + layout_.cls_w, grad + layout_.cls_w,
                    grad + layout_.cls_b, dx.data(), false);
    apply_mask(dx, cls_drop_);
    for (std::size_t i = 0; i < dh.size(); ++i) dh[i] += dx[i];
  }

  if (d_mlm != nullptr && !mlm_pos_.empty()) {
    const std::size_t M = mlm_pos_.size(), V = config_.vocab;
    Buffer<T> dz(M * H);
    linear_backward(mlm_z_.data(), d_mlm, M, H, V, p_ + layout_.tok, grad + layout_.tok, grad + layout_.mlm_out_b,
                    dz.data(), false);
    Buffer<T> dact(M * H);
    layer_norm_backward(dz.data(), M, H, p_ + layout_.mlm_g, mlm_ln_, dact.data(), grad + layout_.mlm_g,
                        grad + layout_.mlm_beta);
    for (std::size_t i = 0; i < dact.size(); ++i) dact[i] *= gelu_grad(mlm_pre_[i]);
    Buffer<T> din(M * H);
    linear_backward(mlm_in_.data(), dact.data(), M, H, H, p_ + layout_.mlm_w, grad + layout_.mlm_w,
                    grad + layout_.mlm_b, din.data(), false);
    for (std::size_t m = 0; m < M; ++m) {
      T* dst = dh.data() + mlm_pos_[m] * H;
      const T* src = din.data() + m * H;
      for (std::size_t h = 0; h < H; ++h) dst[h] += src[h];
    }
  }

  if (d_nsp != nullptr) {
    Buffer<T> first(B_ * H), dfirst(B_ * H);
    for (std::size_t b = 0; b < B_; ++b) std::copy_n(hidden_.data() + b * S_ * H, H, first.data() + b * H);
    linear_backward(first.data(), d_nsp, B_, H, 2, p_ + layout_.nsp_w, grad + layout_.nsp_w, grad + layout_.nsp_b,
                    dfirst.data(), false);
    for (std::size_t b = 0; b < B_; ++b) {
      for (std::size_t h = 0; h < H; ++h) dh[b * S_ * H + h] += dfirst[b * H + h];
    }
  }

  Buffer<T> dr(N_ * H), dx1(N_ * H), dff(N_ * H), dg(N_ * I), dctx(N_ * H), dq(N_ * H), dk(N_ * H), dv(N_ * H);
  for (std::size_t l = config_.layers; l-- > 0;) {
    const auto& L = layout_.layers[l];
    const LayerCache& c = layers_[l];

    layer_norm_backward(dh.data(), N_, H, p_ + L.ffn_g, c.ln2, dr.data(), grad + L.ffn_g, grad + L.ffn_b);
    dx1 = dr;
    dff = dr;
    apply_mask(dff, c.ffn_drop);
    linear_backward(c.g.data(), dff.data(), N_, I, H, p_ + L.ffn_out_w, grad + L.ffn_out_w, grad + L.ffn_out_b,
                    dg.data(), false);
    for (std::size_t i = 0; i < dg.size(); ++i) dg[i] *= gelu_grad(c.u[i]);
    linear_backward(c.x1.data(), dg.data(), N_, H, I, p_ + L.ffn_in_w, grad + L.ffn_in_w, grad + L.ffn_in_b,
                    dx1.data(), true);

    layer_norm_backward(dx1.data(), N_, H, p_ + L.attn_g, c.ln1, dr.data(), grad + L.attn_g, grad + L.attn_b);
    dh = dr;
    apply_mask(dr, c.attn_drop);
    linear_backward(c.ctx.data(), dr.data(), N_, H, H, p_ + L.o_w, grad + L.o_w, grad + L.o_b, dctx.data(), false);
    attention_backward(c, dctx.data(), dq.data(), dk.data(), dv.data());
    linear_backward(c.x_in.data(), dq.data(), N_, H, H, p_ + L.q_w, grad + L.q_w, grad + L.q_b, dh.data(), true);
    linear_backward(c.x_in.data(), dk.data(), N_, H, H, p_ + L.k_w, grad + L.k_w, grad + L.k_b, dh.data(), true);
    linear_backward(c.x_in.data(), dv.data(), N_, H, H, p_ + L.v_w, grad + L.v_w, grad + L.v_b, dh.data(), true);
  }

  apply_mask(dh, emb_drop_);
  Buffer<T> de(N_ * H);
  layer_norm_backward(dh.data(), N_, H, p_ + layout_.emb_g, emb_ln_, de.data(), grad + layout_.emb_g,
                      grad + layout_.emb_b);
  for (std::size_t n = 0; n < N_; ++n) {
    const T* src = de.data() + n * H;
    T* tok = grad + layout_.tok + static_cast<std::size_t>(ids_[n]) * H;
    T* pos = grad + layout_.pos + (n % S_) * H;
    for (std::size_t h = 0; h < H; ++h) {
      tok[h] += src[h];
      pos[h] += src[h];
    }
    if (config_.segments > 0) {
      T* seg = grad + layout_.seg + static_cast<std::size_t>(segs_[n]) * H;
      for (std::size_t h = 0; h < H; ++h) seg[h] += src[h];
    }
  }
}

template void layer_norm_forward<float>(const float*, std::size_t, std::size_t, const float*, const float*, float*,
                                        NormCache<float>&);
template void layer_norm_forward<double>(const double*, std::size_t, std::size_t, const double*, const double*,
                                         double*, NormCache<double>&);
template void layer_norm_backward<float>(const float*, std::size_t, std::size_t, const float*,
                                         const NormCache<float>&, float*, float*, float*);
template void layer_norm_backward<double>(const double*, std::size_t, std::size_t, const double*,
                                          const NormCache<double>&, double*, double*, double*);
template float gelu<float>(float);
template double gelu<double>(double);
template float gelu_grad<float>(float);
template double gelu_grad<double>(double);
template class Encoder<float>;
template class Encoder<double>;

}  // namespace disfl::detail
