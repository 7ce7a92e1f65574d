// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "disfl/error.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/model/checkpoint_io.hpp"
#include "disfl/model/config.hpp"
#include "disfl/model/forward.hpp"
#include "disfl/model/param_layout.hpp"
#include "disfl/quantize/quantize.hpp"
#include "disfl/rng.hpp"
#include "disfl/training/loss.hpp"
#include "doctest.h"
#include "gradcheck.hpp"
#include "model/encoder.hpp"

using namespace disfl;
using testing::micro;
using testing::random_batch;

namespace {

ModelConfig small(std::size_t vocab = 50) {
  ModelConfig c = ModelConfig::make(2, 16, 2, vocab);
  c.max_positions = 16;
  return c;
}

// Copies the rows of `b` with extra trailing padding.
Batch repad(const Batch& b, std::size_t length) {
  Batch o;
  o.batch = b.batch;
  o.length = length;
  for (std::size_t r = 0; r < b.batch; ++r) {
    for (std::size_t t = 0; t < length; ++t) {
      const bool in = t < b.length;
      const std::size_t i = r * b.length + t;
      o.ids.push_back(in ? b.ids[i] : 0);
      o.mask.push_back(in ? b.mask[i] : 0);
      o.segments.push_back(in ? b.segments[i] : 0);
      o.tags.push_back(in ? b.tags[i] : -100);
      o.word_index.push_back(in ? b.word_index[i] : -1);
    }
  }
  return o;
}

}  // namespace

TEST_CASE("count_params reproduces the size table") {
  CHECK(count_params(ModelConfig::make(12, 768, 12, 30522)) == 108'891'648);
  CHECK(count_params(ModelConfig::make(12, 128, 2, 5000)) == 3'085'312);
  CHECK(count_params(ModelConfig::make(6, 96, 2, 5000)) == 1'200'576);
  CHECK(count_params(ModelConfig::make(4, 128, 2, 30522)) == 4'765'952);
  CHECK(count_params(ModelConfig::make(2, 128, 2, 30522)) == 4'369'408);
  CHECK(count_params(ModelConfig::make(24, 192, 3, 5000)) == 11'735'808);
  ModelConfig distil = ModelConfig::make(6, 768, 12, 30522);
  distil.segments = 0;
  CHECK(count_params(distil) == 66'362'880);
}

TEST_CASE("5k-vocab embedding table at H=128") {
  const ParamLayout l(ModelConfig::make(12, 128, 2, 5000));
  CHECK(l.at("embeddings.token").size == 640'000);
}

TEST_CASE("count_params equals the sum over encoder tensors") {
  for (const auto& c : {small(), micro(), ModelConfig::make(3, 24, 4, 77)}) {
    const Checkpoint ck = init_checkpoint(c, 1);
    CHECK(encoder_param_count(ck) == count_params(c));
    std::uint64_t sum = 0;
    const ParamLayout layout(c);
    for (const auto& s : layout.slots()) {
      if (!s.head) sum += ck.tensors.at(s.name).numel();
    }
    CHECK(sum == count_params(c));
  }
}

TEST_CASE("config validation and json") {
  ModelConfig c = small();
  CHECK(config_from_json(to_json(c)) == c);
  c.heads = 3;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK(describe(ModelConfig::make(12, 128, 2, 5000)) == "12x128/v5000");
}

TEST_CASE("init is deterministic with unit gammas and 0.02 spread") {
  const ModelConfig c = small();
  CHECK(init_checkpoint(c, 3) == init_checkpoint(c, 3));
  CHECK_FALSE(init_checkpoint(c, 3) == init_checkpoint(c, 4));
  const Checkpoint ck = init_checkpoint(c, 3);
  const ParamLayout layout(c);
  for (const auto& s : layout.slots()) {
    if (s.kind != ParamKind::Norm || s.name.find("gamma") == std::string::npos) continue;
    for (float v : ck.tensors.at(s.name).data) CHECK(v == 1.0f);
  }

  ModelConfig wide = ModelConfig::make(1, 768, 12, 10);
  wide.max_positions = 4;
  const Checkpoint w = init_checkpoint(wide, 0);
  const auto& q = w.tensors.at("layer.0.attn.q.weight").data;
  REQUIRE(q.size() == 768 * 768);
  const double mean = std::accumulate(q.begin(), q.end(), 0.0) / static_cast<double>(q.size());
  double var = 0.0;
  for (float v : q) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(q.size() - 1));
  CHECK(sd > 0.018);
  CHECK(sd < 0.022);
}

TEST_CASE("layer norm statistics before gamma and beta") {
  Rng rng(5);
  const std::size_t rows = 16, cols = 96;
  std::vector<float> x(rows * cols), y(rows * cols), g(cols, 1.0f), b(cols, 0.0f);
  for (auto& v : x) v = static_cast<float>(3.0 + 4.0 * rng.normal());
  detail::NormCache<float> cache;
  detail::layer_norm_forward(x.data(), rows, cols, g.data(), b.data(), y.data(), cache);
  for (std::size_t r = 0; r < rows; ++r) {
    double m = 0, v = 0;
    for (std::size_t c = 0; c < cols; ++c) m += y[r * cols + c];
    m /= cols;
    for (std::size_t c = 0; c < cols; ++c) v += (y[r * cols + c] - m) * (y[r * cols + c] - m);
    v /= cols;
    CHECK(std::abs(m) < 1e-5);
    CHECK(std::abs(v - 1.0) < 1e-4);
  }
}

TEST_CASE("gelu uses the tanh approximation") {
  for (double x : {-3.0, -0.5, 0.0, 0.7, 2.5}) {
    const double expect = 0.5 * x * (1.0 + std::tanh(std::sqrt(2.0 / M_PI) * (x + 0.044715 * x * x * x)));
    CHECK(detail::gelu(x) == doctest::Approx(expect).epsilon(1e-12));
    const double h = 1e-6;
    CHECK(detail::gelu_grad(x) == doctest::Approx((detail::gelu(x + h) - detail::gelu(x - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("end-to-end gradient check on a micro model") {
  const auto r = testing::gradient_check();
  INFO("worst parameter: " << r.worst_name);
  CHECK(r.worst < 1e-3);
  CHECK(r.nonzero > r.total / 2);
}

TEST_CASE("attention rows sum to one and ignore padding") {
  const ModelConfig c = small();
  const Model m(init_checkpoint(c, 1));
  const Batch b = random_batch(c, 9, {0, 3, 5}, 4);
  for (std::size_t layer = 0; layer < c.layers; ++layer) {
    const auto probs = attention_probabilities(m, b, layer);
    const std::size_t S = b.length;
    REQUIRE(probs.size() == b.batch * c.heads * S * S);
    for (std::size_t row = 0; row < probs.size() / S; ++row) {
      const std::size_t bi = row / (c.heads * S);
      double sum = 0.0;
      for (std::size_t j = 0; j < S; ++j) {
        sum += probs[row * S + j];
        if (!b.mask[bi * S + j]) CHECK(probs[row * S + j] == 0.0f);
      }
      CHECK(std::abs(sum - 1.0) < 1e-5);
    }
  }
}

TEST_CASE("logits are invariant to right padding") {
  const ModelConfig c = small();
  const Model m(init_checkpoint(c, 8));
  const Batch b = random_batch(c, 7, {0, 2}, 9);
  const Batch wide = repad(b, 13);
  const Logits a = forward(m, b), w = forward(m, wide);
  for (std::size_t r = 0; r < b.batch; ++r) {
    for (std::size_t t = 0; t < b.length; ++t) {
      if (!b.mask[r * b.length + t]) continue;
      for (std::size_t k = 0; k < c.num_tags; ++k) {
        CHECK(std::abs(a.at(r * b.length + t, k) - w.at(r * wide.length + t, k)) < 1e-5);
      }
    }
  }
}

TEST_CASE("forward is deterministic and permutation equivariant") {
  const ModelConfig c = small();
  const Model m(init_checkpoint(c, 2));
  const Batch b = random_batch(c, 6, {0, 1}, 3);
  const Logits x = forward(m, b);
  CHECK(forward(m, b).values == x.values);
  Batch swapped = b;
  const std::size_t S = b.length;
  for (std::size_t t = 0; t < S; ++t) {
    std::swap(swapped.ids[t], swapped.ids[S + t]);
    std::swap(swapped.mask[t], swapped.mask[S + t]);
    std::swap(swapped.segments[t], swapped.segments[S + t]);
  }
  const Logits y = forward(m, swapped);
  for (std::size_t t = 0; t < S; ++t) {
    for (std::size_t k = 0; k < c.num_tags; ++k) {
      CHECK(y.at(t, k) == x.at(S + t, k));
      CHECK(y.at(S + t, k) == x.at(t, k));
    }
  }
}

TEST_CASE("zero classifier head gives uniform probabilities") {
  const ModelConfig c = small();
  Model m(init_checkpoint(c, 5));
  const auto& l = m.layout();
  auto p = m.mutable_params();
  for (const char* name : {"head.classifier.weight", "head.classifier.bias"}) {
    const auto& s = l.at(name);
    std::fill(p.begin() + static_cast<std::ptrdiff_t>(s.offset),
              p.begin() + static_cast<std::ptrdiff_t>(s.offset + s.size), 0.0f);
  }
  const Logits lg = forward(m, random_batch(c, 5, {0, 1}, 1));
  for (float v : lg.values) CHECK(v == 0.0f);
}

TEST_CASE("mlm and nsp heads") {
  ModelConfig c = ModelConfig::make(2, 128, 2, 5000);
  c.max_positions = 32;
  const Model m(init_checkpoint(c, 0));
  const Batch b = random_batch(c, 32, {0, 0, 0, 0}, 6);

  const auto none = forward_mlm_nsp(m, b, {});
  CHECK(none.mlm.rows == 0);
  CHECK(none.nsp.rows == 4);
  CHECK(none.nsp.cols == 2);

  std::vector<std::size_t> pos;
  std::vector<std::int32_t> targets;
  Rng rng(1);
  for (std::size_t i = 0; i < b.positions(); ++i) {
    if (i % b.length == 0 || i % b.length == b.length - 1) continue;
    pos.push_back(i);
    targets.push_back(static_cast<std::int32_t>(5 + rng.index(c.vocab - 5)));
  }
  const auto out = forward_mlm_nsp(m, b, pos);
  CHECK(out.mlm.rows == pos.size());
  CHECK(out.mlm.cols == c.vocab);
  const double loss = token_ce_loss<float>(out.mlm.values, c.vocab, targets).loss;
  CHECK(std::abs(loss - std::log(5000.0)) < 0.05 * std::log(5000.0));
}

TEST_CASE("check_batch rejects bad input") {
  const ModelConfig c = small();
  const Model m(init_checkpoint(c, 0));
  Batch b = random_batch(c, 5, {0}, 1);
  b.ids[2] = static_cast<TokenId>(c.vocab);
  try {
    forward(m, b);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IdOutOfRange);
  }
  Batch longer = random_batch(c, c.max_positions + 1, {0}, 1);
  CHECK_THROWS_AS(forward(m, longer), Error);
}

TEST_CASE("checkpoint round-trip is bit-identical") {
  Checkpoint ck = init_checkpoint(small(), 9);
  ck.vocab_digest = "abc123";
  const std::string bytes = serialize_checkpoint(ck);
  CHECK(deserialize_checkpoint(bytes) == ck);
  CHECK(serialize_checkpoint(deserialize_checkpoint(bytes)) == bytes);
  CHECK(bytes.size() == serialized_size(ck.config, Precision::Float32, ck.vocab_digest));

  const auto path = std::filesystem::temp_directory_path() / "disfl_ckpt_test.dfl";
  save_checkpoint(ck, path);
  CHECK(load_checkpoint(path) == ck);
  std::filesystem::remove(path);
}

TEST_CASE("truncated or damaged checkpoints are rejected") {
  const std::string bytes = serialize_checkpoint(init_checkpoint(small(), 1));
  for (std::size_t cut : {std::size_t{3}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    try {
      deserialize_checkpoint(bytes.substr(0, cut));
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CorruptFile);
    }
  }
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(deserialize_checkpoint(bad), Error);

  Checkpoint missing = init_checkpoint(small(), 1);
  missing.tensors.erase("layer.1.ffn.in.weight");
  try {
    missing.validate();
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingTensor);
  }
}

TEST_CASE("int8 checkpoints reload as quantized") {
  const Checkpoint q = quantize_checkpoint(init_checkpoint(small(), 4));
  const std::string bytes = serialize_checkpoint(q);
  const Checkpoint back = deserialize_checkpoint(bytes);
  CHECK(back.precision == Precision::Int8Quantized);
  CHECK(back == q);
  CHECK(bytes.size() == serialized_size(q.config, Precision::Int8Quantized));
}

TEST_CASE("flatten and from_flat are inverse") {
  const Checkpoint ck = init_checkpoint(small(), 12);
  const auto flat = flatten(ck);
  CHECK(from_flat(ck.config, flat) == ck);
  CHECK(Model(ck).to_checkpoint() == ck);
  CHECK(checkpoint_digest(ck) == checkpoint_digest(from_flat(ck.config, flat)));
}
