// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/model/checkpoint.hpp"

#include <algorithm>
#include <cmath>

#include "disfl/digest.hpp"
#include "disfl/error.hpp"
#include "disfl/rng.hpp"

namespace disfl {

namespace {

constexpr double kInitStd = 0.02;

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) out += (i ? "," : "") + std::to_string(shape[i]);
  return out + "]";
}

}  // namespace

std::size_t Tensor::numel() const noexcept {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::size_t QuantizedTensor::cols() const noexcept {
  std::size_t n = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) n *= shape[i];
  return shape.empty() ? 0 : n;
}

Tensor dequantize(const QuantizedTensor& q) {
  Tensor t;
  t.shape = q.shape;
  const std::size_t rows = q.rows(), cols = q.cols();
  t.data.resize(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const float s = q.scale[r];
    const std::int32_t z = q.zero_point[r];
    for (std::size_t c = 0; c < cols; ++c) {
      t.data[r * cols + c] = static_cast<float>(static_cast<std::int32_t>(q.data[r * cols + c]) - z) * s;
    }
  }
  return t;
}

std::string_view to_string(Precision p) { return p == Precision::Float32 ? "float32" : "int8"; }

Precision parse_precision(std::string_view text) {
  if (text == "float32") return Precision::Float32;
  if (text == "int8") return Precision::Int8Quantized;
  throw Error(ErrorCode::CorruptFile, "unknown precision '" + std::string(text) + "'");
}

void Checkpoint::validate() const {
  const ParamLayout layout(config);
  std::size_t seen = 0;
  for (const auto& slot : layout.slots()) {
    const std::vector<std::size_t>* shape = nullptr;
    std::size_t elems = 0;
    if (auto it = tensors.find(slot.name); it != tensors.end()) {
      shape = &it->second.shape;
      elems = it->second.data.size();
    } else if (auto qt = quantized.find(slot.name); qt != quantized.end()) {
      shape = &qt->second.shape;
      elems = qt->second.data.size();
      if (qt->second.scale.size() != qt->second.rows() || qt->second.zero_point.size() != qt->second.rows()) {
        throw Error(ErrorCode::ShapeMismatch, slot.name + ": scale/zero_point length != rows");
      }
    } else {
      throw Error(ErrorCode::MissingTensor, "missing tensor " + slot.name);
    }
    if (*shape != slot.shape || elems != slot.size) {
      throw Error(ErrorCode::ShapeMismatch,
                  slot.name + ": expected " + shape_string(slot.shape) + ", got " + shape_string(*shape));
    }
    ++seen;
  }
  if (seen != tensors.size() + quantized.size()) {
    throw Error(ErrorCode::ShapeMismatch, "checkpoint has tensors not in the layout");
  }
  if (precision == Precision::Float32 && !quantized.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "float32 checkpoint holds int8 tensors");
  }
}

Checkpoint init_checkpoint(const ModelConfig& config, std::uint64_t seed) {
  const ParamLayout layout(config);
  Checkpoint ckpt;
  ckpt.config = config;
  for (std::size_t i = 0; i < layout.slots().size(); ++i) {
    const auto& slot = layout.slots()[i];
    Tensor t;
    t.shape = slot.shape;
    switch (slot.kind) {
      case ParamKind::Bias:
        t.data.assign(slot.size, 0.0f);
        break;
      case ParamKind::Norm:
        t.data.assign(slot.size, slot.name.ends_with("gamma") ? 1.0f : 0.0f);
        break;
      case ParamKind::Matrix:
      case ParamKind::Embedding: {
        Rng rng(Rng::derive(seed, i));
        t.data.resize(slot.size);
        for (auto& v : t.data) v = static_cast<float>(std::clamp(rng.normal(), -2.0, 2.0) * kInitStd);
        break;
      }
    }
    ckpt.tensors.emplace(slot.name, std::move(t));
  }
  return ckpt;
}

std::uint64_t encoder_param_count(const Checkpoint& ckpt) {
  std::uint64_t n = 0;
  for (const auto& [name, t] : ckpt.tensors) {
    if (!name.starts_with("head.")) n += t.data.size();
  }
  for (const auto& [name, q] : ckpt.quantized) {
    if (!name.starts_with("head.")) n += q.data.size();
  }
  return n;
}

std::vector<float> flatten(const Checkpoint& ckpt) {
  ckpt.validate();
  const ParamLayout layout(ckpt.config);
  std::vector<float> flat(layout.total());
  for (const auto& slot : layout.slots()) {
    if (auto it = ckpt.tensors.find(slot.name); it != ckpt.tensors.end()) {
      std::copy(it->second.data.begin(), it->second.data.end(), flat.begin() + static_cast<std::ptrdiff_t>(slot.offset));
    } else {
      const Tensor t = dequantize(ckpt.quantized.at(slot.name));
      std::copy(t.data.begin(), t.data.end(), flat.begin() + static_cast<std::ptrdiff_t>(slot.offset));
    }
  }
  return flat;
}

Checkpoint from_flat(const ModelConfig& config, std::span<const float> params, std::string vocab_digest) {
  const ParamLayout layout(config);
  if (params.size() != layout.total()) {
    throw Error(ErrorCode::ShapeMismatch, "flat buffer has " + std::to_string(params.size()) + " values, layout needs " +
                                              std::to_string(layout.total()));
  }
  Checkpoint ckpt;
  ckpt.config = config;
  ckpt.vocab_digest = std::move(vocab_digest);
  for (const auto& slot : layout.slots()) {
    Tensor t;
    t.shape = slot.shape;
    const auto first = params.begin() + static_cast<std::ptrdiff_t>(slot.offset);
    t.data.assign(first, first + static_cast<std::ptrdiff_t>(slot.size));
    ckpt.tensors.emplace(slot.name, std::move(t));
  }
  return ckpt;
}

std::string checkpoint_digest(const Checkpoint& ckpt) {
  Fnv1a h;
  h.update(to_json(ckpt.config));
  h.update(to_string(ckpt.precision));
  for (const auto& [name, t] : ckpt.tensors) {
    h.update(name);
    h.update(std::as_bytes(std::span(t.data)));
  }
  for (const auto& [name, q] : ckpt.quantized) {
    h.update(name);
    h.update(std::as_bytes(std::span(q.data)));
    h.update(std::as_bytes(std::span(q.scale)));
    h.update(std::as_bytes(std::span(q.zero_point)));
  }
  return h.hex();
}

Model::Model(const Checkpoint& ckpt)
    : config_(ckpt.config), layout_(ckpt.config), vocab_digest_(ckpt.vocab_digest) {
  const auto flat = flatten(ckpt);
  params_.assign(flat.begin(), flat.end());
}

Model::Model(const ModelConfig& config, std::span<const float> params, std::string vocab_digest)
    : config_(config), layout_(config), params_(params.begin(), params.end()), vocab_digest_(std::move(vocab_digest)) {
  if (params_.size() != layout_.total()) throw Error(ErrorCode::ShapeMismatch, "parameter buffer does not match config");
}

Checkpoint Model::to_checkpoint() const { return from_flat(config_, params_, vocab_digest_); }

}  // namespace disfl
