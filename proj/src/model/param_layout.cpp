// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/model/param_layout.hpp"

#include "disfl/error.hpp"

namespace disfl {

ParamLayout::ParamLayout(const ModelConfig& c) {
  c.validate();
  const std::size_t H = c.hidden, I = c.intermediate;
  tok = add("embeddings.token", {c.vocab, H}, ParamKind::Embedding, false);
  pos = add("embeddings.position", {c.max_positions, H}, ParamKind::Embedding, false);
  seg = c.segments > 0 ? add("embeddings.segment", {c.segments, H}, ParamKind::Embedding, false) : 0;
  emb_g = add("embeddings.ln.gamma", {H}, ParamKind::Norm, false);
  emb_b = add("embeddings.ln.beta", {H}, ParamKind::Norm, false);
  for (std::size_t l = 0; l < c.layers; ++l) {
    const std::string p = "layer." + std::to_string(l) + ".";
    Layer L{};
    L.q_w = add(p + "attn.q.weight", {H, H}, ParamKind::Matrix, false);
    L.q_b = add(p + "attn.q.bias", {H}, ParamKind::Bias, false);
    L.k_w = add(p + "attn.k.weight", {H, H}, ParamKind::Matrix, false);
    L.k_b = add(p + "attn.k.bias", {H}, ParamKind::Bias, false);
    L.v_w = add(p + "attn.v.weight", {H, H}, ParamKind::Matrix, false);
    L.v_b = add(p + "attn.v.bias", {H}, ParamKind::Bias, false);
    L.o_w = add(p + "attn.out.weight", {H, H}, ParamKind::Matrix, false);
    L.o_b = add(p + "attn.out.bias", {H}, ParamKind::Bias, false);
    L.attn_g = add(p + "attn.ln.gamma", {H}, ParamKind::Norm, false);
    L.attn_b = add(p + "attn.ln.beta", {H}, ParamKind::Norm, false);
    L.ffn_in_w = add(p + "ffn.in.weight", {I, H}, ParamKind::Matrix, false);
    L.ffn_in_b = add(p + "ffn.in.bias", {I}, ParamKind::Bias, false);
    L.ffn_out_w = add(p + "ffn.out.weight", {H, I}, ParamKind::Matrix, false);
    L.ffn_out_b = add(p + "ffn.out.bias", {H}, ParamKind::Bias, false);
    L.ffn_g = add(p + "ffn.ln.gamma", {H}, ParamKind::Norm, false);
    L.ffn_b = add(p + "ffn.ln.beta", {H}, ParamKind::Norm, false);
    layers.push_back(L);
  }
  cls_w = add("head.classifier.weight", {c.num_tags, H}, ParamKind::Matrix, true);
  cls_b = add("head.classifier.bias", {c.num_tags}, ParamKind::Bias, true);
  mlm_w = add("head.mlm.transform.weight", {H, H}, ParamKind::Matrix, true);
  mlm_b = add("head.mlm.transform.bias", {H}, ParamKind::Bias, true);
  mlm_g = add("head.mlm.ln.gamma", {H}, ParamKind::Norm, true);
  mlm_beta = add("head.mlm.ln.beta", {H}, ParamKind::Norm, true);
  mlm_out_b = add("head.mlm.output_bias", {c.vocab}, ParamKind::Bias, true);
  nsp_w = add("head.nsp.weight", {2, H}, ParamKind::Matrix, true);
  nsp_b = add("head.nsp.bias", {2}, ParamKind::Bias, true);
}

std::size_t ParamLayout::add(std::string name, std::vector<std::size_t> shape, ParamKind kind, bool head) {
  ParamSlot s;
  s.name = std::move(name);
  s.size = 1;
  for (std::size_t d : shape) s.size *= d;
  s.shape = std::move(shape);
  s.offset = total_;
  s.kind = kind;
  s.head = head;
  total_ += s.size;
  if (!head) encoder_total_ += s.size;
  const std::size_t offset = s.offset;
  slots_.push_back(std::move(s));
  return offset;
}

std::optional<std::size_t> ParamLayout::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].name == name) return i;
  }
  return std::nullopt;
}

const ParamSlot& ParamLayout::at(std::string_view name) const {
  const auto i = index_of(name);
  if (!i) throw Error(ErrorCode::MissingTensor, "no tensor named " + std::string(name));
  return slots_[*i];
}

}  // namespace disfl
