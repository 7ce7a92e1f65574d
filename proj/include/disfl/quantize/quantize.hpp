// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "disfl/model/checkpoint.hpp"
#include "disfl/model/forward.hpp"
#include "disfl/tokenizer/encode.hpp"

namespace disfl {

/// Per-row asymmetric int8: scale = (max - min) / 255,
/// zero_point = round(-min / scale) - 128, q = clamp(round(v / scale) + zp).
/// A constant row c is stored exactly: scale 1 and q 0 for c == 0, otherwise
/// scale |c|, zero point 0 and q = sign(c).
/// Throws InvalidArgument for non 2-D input and NonFiniteValues.
QuantizedTensor quantize_tensor(const Tensor& t);

/// Quantizes every encoder matrix and embedding table; biases, LayerNorm and
/// head tensors stay float. Throws AlreadyQuantized for int8 input.
Checkpoint quantize_checkpoint(const Checkpoint& ckpt);

/// Same contract as forward(); int8 weights are dequantized when the model is
/// loaded. Throws NotQuantized for float checkpoints.
Logits forward_quantized(const Checkpoint& qckpt, const Batch& batch);

}  // namespace disfl
