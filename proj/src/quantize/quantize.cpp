// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/quantize/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "disfl/error.hpp"

namespace disfl {

QuantizedTensor quantize_tensor(const Tensor& t) {
  if (t.shape.size() != 2) throw Error(ErrorCode::InvalidArgument, "quantize_tensor expects a 2-D tensor");
  if (t.data.size() != t.numel()) throw Error(ErrorCode::ShapeMismatch, "tensor data does not match its shape");
  QuantizedTensor q;
  q.shape = t.shape;
  const std::size_t rows = t.shape[0], cols = t.shape[1];
  q.data.resize(rows * cols);
  q.scale.resize(rows);
  q.zero_point.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const float* row = t.data.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!std::isfinite(row[c])) {
        throw Error(ErrorCode::NonFiniteValues, "non-finite value at row " + std::to_string(r));
      }
    }
    std::int8_t* out = q.data.data() + r * cols;
    if (cols == 0) {
      q.scale[r] = 1.0f;
      continue;
    }
    const auto [mn_it, mx_it] = std::minmax_element(row, row + cols);
    const double mn = *mn_it, mx = *mx_it;
    if (mx == mn) {
      q.zero_point[r] = 0;
      q.scale[r] = mn == 0.0 ? 1.0f : static_cast<float>(std::abs(mn));
      const std::int8_t v = mn == 0.0 ? 0 : (mn > 0.0 ? 1 : -1);
      std::fill(out, out + cols, v);
      continue;
    }
    // The float-rounded scale can make the rounded extremes span 256 steps;
    // widen it by one ULP at a time so the maximum never clamps.
    float scale_f = static_cast<float>((mx - mn) / 255.0);
    while (std::lround(mx / scale_f) - std::lround(mn / scale_f) > 255) {
      scale_f = std::nextafter(scale_f, std::numeric_limits<float>::infinity());
    }
    const double scale = scale_f;
    const long zp = std::lround(-mn / scale) - 128;
    q.scale[r] = static_cast<float>(scale);
    q.zero_point[r] = static_cast<std::int32_t>(zp);
    for (std::size_t c = 0; c < cols; ++c) {
      const long v = std::lround(static_cast<double>(row[c]) / scale) + zp;
      out[c] = static_cast<std::int8_t>(std::clamp(v, -128L, 127L));
    }
  }
  return q;
}

Checkpoint quantize_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.precision == Precision::Int8Quantized) {
    throw Error(ErrorCode::AlreadyQuantized, "checkpoint is already int8-quantized");
  }
  ckpt.validate();
  const ParamLayout layout(ckpt.config);
  Checkpoint out;
  out.config = ckpt.config;
  out.precision = Precision::Int8Quantized;
  out.vocab_digest = ckpt.vocab_digest;
  for (const auto& slot : layout.slots()) {
    const Tensor& t = ckpt.tensors.at(slot.name);
    if (slot.quantizable()) {
      out.quantized.emplace(slot.name, quantize_tensor(t));
    } else {
      out.tensors.emplace(slot.name, t);
    }
  }
  return out;
}

Logits forward_quantized(const Checkpoint& qckpt, const Batch& batch) {
  if (qckpt.precision != Precision::Int8Quantized) {
    throw Error(ErrorCode::NotQuantized, "forward_quantized needs an int8 checkpoint");
  }
  return forward(Model(qckpt), batch);
}

}  // namespace disfl
