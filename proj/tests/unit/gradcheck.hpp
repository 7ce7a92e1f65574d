// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

// Micro model and central-difference gradient check shared by the model
// suite and the acceptance run.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "disfl/model/config.hpp"
#include "disfl/model/param_layout.hpp"
#include "disfl/rng.hpp"
#include "disfl/tokenizer/encode.hpp"
#include "disfl/training/loss.hpp"
#include "model/encoder.hpp"

namespace disfl::testing {

inline ModelConfig micro() {
  ModelConfig c = ModelConfig::make(1, 8, 2, 20);
  c.max_positions = 8;
  c.dropout = 0.0;
  return c;
}

// Random ids in [kNumSpecials, vocab), [CLS] first, [SEP] at the end of each
// row and `pads[b]` trailing pads.
inline Batch random_batch(const ModelConfig& c, std::size_t length, std::vector<std::size_t> pads, std::uint64_t seed) {
  Rng rng(seed);
  Batch b;
  b.batch = pads.size();
  b.length = length;
  for (std::size_t r = 0; r < b.batch; ++r) {
    const std::size_t real = length - pads[r];
    for (std::size_t t = 0; t < length; ++t) {
      TokenId id = 0;
      if (t == 0) id = 2;
      else if (t + 1 == real) id = 3;
      else if (t < real) id = static_cast<TokenId>(5 + rng.index(c.vocab - 5));
      b.ids.push_back(id);
      b.mask.push_back(t < real ? 1 : 0);
      b.segments.push_back(c.segments > 1 && t >= real / 2 && t < real ? 1 : 0);
      b.tags.push_back(t > 0 && t + 1 < real ? static_cast<std::int32_t>(rng.index(3)) : -100);
      b.word_index.push_back(t > 0 && t + 1 < real ? static_cast<std::int32_t>(t - 1) : -1);
    }
  }
  return b;
}

struct MicroLoss {
  ModelConfig config;
  ParamLayout layout;
  Batch batch;
  std::vector<std::size_t> masked;
  std::vector<std::int32_t> mlm_targets;
  std::vector<std::int32_t> nsp_targets;

  double value(const detail::Buffer<double>& p) const {
    detail::Encoder<double> enc(config, layout, p.data());
    enc.run(batch, nullptr);
    detail::Buffer<double> cls, mlm, nsp;
    enc.classify(cls);
    enc.mlm(masked, mlm);
    enc.nsp(nsp);
    return token_ce_loss<double>(cls, config.num_tags, batch.tags).loss +
           token_ce_loss<double>(mlm, config.vocab, mlm_targets).loss +
           token_ce_loss<double>(nsp, 2, nsp_targets).loss;
  }

  detail::Buffer<double> gradient(const detail::Buffer<double>& p) const {
    detail::Encoder<double> enc(config, layout, p.data());
    enc.run(batch, nullptr);
    detail::Buffer<double> cls, mlm, nsp;
    enc.classify(cls);
    enc.mlm(masked, mlm);
    enc.nsp(nsp);
    const auto lc = token_ce_loss<double>(cls, config.num_tags, batch.tags);
    const auto lm = token_ce_loss<double>(mlm, config.vocab, mlm_targets);
    const auto ln = token_ce_loss<double>(nsp, 2, nsp_targets);
    detail::Buffer<double> g(layout.total(), 0.0);
    enc.backward(lc.grad.data(), lm.grad.data(), ln.grad.data(), g.data());
    return g;
  }
};

struct GradCheck {
  double worst = 0.0;
  std::string worst_name;
  std::size_t nonzero = 0;
  std::size_t total = 0;
};

// Classification, MLM and NSP losses summed over one padded batch; every
// parameter checked against a central difference with step 1e-5.
inline GradCheck gradient_check() {
  MicroLoss f{micro(), ParamLayout(micro()), {}, {}, {}, {}};
  f.batch = random_batch(f.config, 6, {0, 2}, 11);
  f.masked = {1, 3, 7};
  f.mlm_targets = {6, 11, 19};
  f.nsp_targets = {0, 1};

  // Larger-than-init weights so every path carries signal.
  Rng rng(2);
  detail::Buffer<double> p(f.layout.total());
  for (const auto& s : f.layout.slots()) {
    for (std::size_t i = 0; i < s.size; ++i) {
      const double n = rng.normal();
      p[s.offset + i] = s.kind == ParamKind::Norm && s.name.find("gamma") != std::string::npos ? 1.0 + 0.2 * n : 0.4 * n;
    }
  }
  const auto g = f.gradient(p);
  const double h = 1e-5;
  GradCheck out;
  out.total = f.layout.total();
  for (const auto& s : f.layout.slots()) {
    for (std::size_t i = 0; i < s.size; ++i) {
      const std::size_t k = s.offset + i;
      auto q = p;
      q[k] = p[k] + h;
      const double up = f.value(q);
      q[k] = p[k] - h;
      const double down = f.value(q);
      const double num = (up - down) / (2 * h);
      const double rel = std::abs(num - g[k]) / std::max({std::abs(num), std::abs(g[k]), 1e-6});
      if (std::abs(g[k]) > 1e-8) ++out.nonzero;
      if (rel > out.worst) {
        out.worst = rel;
        out.worst_name = s.name;
      }
    }
  }
  return out;
}

}  // namespace disfl::testing
