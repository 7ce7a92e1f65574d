// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <set>

#include "disfl/error.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/training/adam.hpp"
#include "disfl/training/finetune.hpp"
#include "disfl/training/history.hpp"
#include "disfl/training/loss.hpp"
#include "disfl/training/pretrain.hpp"
#include "disfl/training/sweep.hpp"
#include "disfl/training/trainer.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace disfl;

namespace {

std::vector<Document> as_documents(const std::vector<WordSequence>& sentences, std::size_t per_doc) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i % per_doc == 0) docs.emplace_back();
    docs.back().push_back(sentences[i]);
  }
  return docs;
}

}  // namespace

TEST_CASE("cross entropy basics") {
  const std::vector<double> uniform(3, 0.25);
  const std::vector<std::int32_t> t1 = {2};
  CHECK(token_ce_loss<double>(uniform, 3, t1).loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  const std::vector<double> sharp = {50.0, 0.0, 0.0};
  const std::vector<std::int32_t> t0 = {0};
  CHECK(token_ce_loss<double>(sharp, 3, t0).loss < 1e-15);

  const std::vector<std::int32_t> ignored = {kIgnoreTag};
  CHECK_THROWS_AS(token_ce_loss<double>(uniform, 3, ignored), Error);
}

TEST_CASE("cross entropy gradient matches finite differences") {
  Rng rng(3);
  std::vector<double> logits(2 * 4 * 3);
  for (auto& v : logits) v = 2.0 * rng.normal();
  const std::vector<std::int32_t> targets = {0, 2, kIgnoreTag, 1, 1, kIgnoreTag, 2, 0};
  const auto r = token_ce_loss<double>(logits, 3, targets);
  const double h = 1e-6;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    auto p = logits, m = logits;
    p[i] += h;
    m[i] -= h;
    const double num =
        (token_ce_loss<double>(p, 3, targets).loss - token_ce_loss<double>(m, 3, targets).loss) / (2 * h);
    CHECK(std::abs(num - r.grad[i]) <= 1e-4 * std::max({std::abs(num), std::abs(r.grad[i]), 1e-8}));
  }
}

TEST_CASE("ignored positions change neither loss nor gradient") {
  std::vector<double> a = {1, 2, 3, 0.5, -1, 4}, b = a;
  b[3] = 100;
  b[4] = -50;
  const std::vector<std::int32_t> t = {1, kIgnoreTag};
  const auto ra = token_ce_loss<double>(a, 3, t), rb = token_ce_loss<double>(b, 3, t);
  CHECK(ra.loss == rb.loss);
  CHECK(ra.grad == rb.grad);
  CHECK(ra.grad[3] == 0.0);
}

TEST_CASE("adam first step has the closed form") {
  std::vector<float> p = {1.0f, -2.0f, 0.5f};
  const std::vector<float> g = {0.3f, -4.0f, 1e-3f};
  AdamState s(3);
  AdamConfig cfg;
  cfg.weight_decay = 0.0;
  const double lr = 0.01;
  const auto before = p;
  adam_step(p, g, s, lr, cfg);
  for (std::size_t i = 0; i < 3; ++i) {
    const double expect = before[i] - lr * g[i] / (std::abs(g[i]) + cfg.eps);
    CHECK(p[i] == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("weight decay skips masked-out parameters") {
  std::vector<float> p = {1.0f, 1.0f};
  const std::vector<float> g = {0.0f, 0.0f};
  const std::vector<std::uint8_t> decay = {1, 0};
  AdamState s(2);
  adam_step(p, g, s, 0.1, AdamConfig{}, decay);
  CHECK(p[0] < 1.0f);
  CHECK(p[1] == 1.0f);
}

TEST_CASE("adam rejects non-finite gradients before updating") {
  std::vector<float> p = {1.0f, 2.0f};
  const std::vector<float> g = {0.1f, std::nanf("")};
  AdamState s(2);
  try {
    adam_step(p, g, s, 0.1, AdamConfig{});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteGradient);
  }
  CHECK(p == std::vector<float>{1.0f, 2.0f});
  CHECK(s.step == 0);
}

TEST_CASE("learning rate schedule") {
  CHECK(scheduled_lr(1e-3, Schedule::LinearToZero, 0, 10) == doctest::Approx(1e-3));
  CHECK(scheduled_lr(1e-3, Schedule::LinearToZero, 5, 10) == doctest::Approx(5e-4));
  CHECK(scheduled_lr(1e-3, Schedule::LinearToZero, 10, 10) == 0.0);
  CHECK(scheduled_lr(1e-3, Schedule::Constant, 9, 10) == 1e-3);

  std::vector<float> p = {1.0f};
  AdamState s(1);
  const std::vector<float> g = {1.0f};
  adam_step(p, g, s, scheduled_lr(0.1, Schedule::LinearToZero, 10, 10), AdamConfig{});
  CHECK(p[0] == 1.0f);
}

TEST_CASE("adam minimizes a quadratic bowl") {
  std::vector<float> x = {1.5f, -2.0f, 0.7f, 3.0f};
  AdamState s(x.size());
  AdamConfig cfg;
  cfg.weight_decay = 0.0;
  for (int t = 0; t < 500; ++t) {
    std::vector<float> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0f * x[i];
    adam_step(x, g, s, scheduled_lr(0.1, Schedule::LinearToZero, static_cast<std::uint64_t>(t), 500), cfg);
  }
  double f = 0.0;
  for (float v : x) f += static_cast<double>(v) * v;
  CHECK(f < 1e-6);
}

TEST_CASE("cyclic sampler visits each item once per pass") {
  CyclicSampler s(7, 3);
  for (int pass = 0; pass < 3; ++pass) {
    std::set<std::size_t> seen;
    for (int i = 0; i < 7; ++i) seen.insert(s.next());
    CHECK(seen.size() == 7);
  }
  CHECK(s.passes() == 3);
}

TEST_CASE("history jsonl round-trip") {
  History h(2);
  h[0] = {10, "train", 0.5, 0, 0, 0, 1.0, 1e-4, -1.0};
  h[1] = {10, "dev", 0.0, 0.8, 0.7, 0.746, 1.0, 1e-4, 0.7};
  const auto path = std::filesystem::temp_directory_path() / "disfl_history.jsonl";
  write_history(path, h);
  CHECK(read_history(path) == h);
  std::filesystem::remove(path);
}

TEST_CASE("train config json round-trip") {
  TrainConfig c;
  c.learning_rate = 3e-4;
  c.batch_size = 8;
  c.schedule = Schedule::Constant;
  c.seed = 42;
  const TrainConfig d = TrainConfig::from_json(c.to_json());
  CHECK(d.learning_rate == c.learning_rate);
  CHECK(d.batch_size == 8);
  CHECK(d.schedule == Schedule::Constant);
  CHECK(d.seed == 42);
}

TEST_CASE("finetune with zero epochs returns the initial weights") {
  const auto gold = testing::labeled(30, 1);
  const Vocab v = testing::vocab_for(gold, 120);
  const Checkpoint init = init_checkpoint(testing::tiny_config(v), 0);
  TrainConfig cfg;
  cfg.epochs = 0;
  const auto r = finetune(init, v, gold, gold, cfg);
  CHECK(r.history.empty());
  CHECK(r.best.tensors == init.tensors);
}

TEST_CASE("finetune rejects silver dev data and mismatched vocab") {
  auto gold = testing::labeled(20, 2);
  const Vocab v = testing::vocab_for(gold, 100);
  const Checkpoint init = init_checkpoint(testing::tiny_config(v), 0);
  auto dev = gold;
  dev[3].origin = Origin::Silver;
  TrainConfig cfg;
  cfg.epochs = 1;
  try {
    finetune(init, v, gold, dev, cfg);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ProvenanceViolation);
  }
  Checkpoint other = init;
  other.vocab_digest = "0000";
  try {
    finetune(other, v, gold, gold, cfg);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VocabMismatch);
  }
}

TEST_CASE("finetune is deterministic and overfits a small set") {
  const auto gold = testing::labeled(200, 3);
  const Vocab v = testing::vocab_for(gold, 400);
  const Checkpoint init = init_checkpoint(testing::tiny_config(v), 1);
  TrainConfig cfg;
  cfg.learning_rate = 5e-3;
  cfg.batch_size = 16;
  cfg.epochs = 55;
  cfg.seed = 5;
  cfg.eval_every = 65;
  const auto a = finetune(init, v, gold, gold, cfg);
  CHECK(a.best_dev_f1 > 0.95);
  CHECK(a.steps == 55 * 13);
  for (const auto& r : a.history) {
    if (r.split == "dev") CHECK(r.f1 <= a.best_dev_f1);
  }
  CHECK(evaluate(Model(a.best), v, gold).f1 == doctest::Approx(a.best_dev_f1));

  cfg.epochs = 3;
  const auto b = finetune(init, v, gold, gold, cfg);
  const auto c = finetune(init, v, gold, gold, cfg);
  CHECK(b.history == c.history);
  CHECK(b.best == c.best);
}

TEST_CASE("pretraining masks 15 percent with the 80/10/10 split") {
  const auto sents = generate_fluent(600, 7);
  const auto docs = as_documents(sents, 5);
  std::vector<std::vector<std::string>> words(sents.begin(), sents.end());
  const Vocab v = train_wordpiece(words, 300);
  PretrainOptions opt;
  opt.batch_size = 16;
  PretrainBatcher batcher(docs, v, opt, 3);
  CHECK_FALSE(batcher.degenerate());
  std::size_t eligible = 0, masked = 0, mask_id = 0, kept = 0, is_next = 0, pairs = 0;
  while (eligible < 10'000) {
    const auto pb = batcher.next();
    std::set<std::size_t> mp(pb.masked_positions.begin(), pb.masked_positions.end());
    for (std::size_t i = 0; i < pb.batch.positions(); ++i) {
      if (!pb.batch.mask[i]) continue;
      const bool special = pb.batch.ids[i] == Vocab::kCls || pb.batch.ids[i] == Vocab::kSep;
      if (!special || mp.count(i)) ++eligible;
    }
    for (std::size_t k = 0; k < pb.masked_positions.size(); ++k) {
      ++masked;
      const TokenId now = pb.batch.ids[pb.masked_positions[k]];
      if (now == Vocab::kMask) ++mask_id;
      if (now == pb.mlm_targets[k]) ++kept;
    }
    for (auto l : pb.nsp_labels) is_next += l == static_cast<std::int32_t>(NspLabel::IsNext);
    pairs += pb.nsp_labels.size();
  }
  const double frac = static_cast<double>(masked) / static_cast<double>(eligible);
  CHECK(frac > 0.135);
  CHECK(frac < 0.165);
  const double mask_share = static_cast<double>(mask_id) / static_cast<double>(masked);
  CHECK(mask_share > 0.75);
  CHECK(mask_share < 0.85);
  CHECK(static_cast<double>(kept) / static_cast<double>(masked) > 0.06);
  const double next_share = static_cast<double>(is_next) / static_cast<double>(pairs);
  CHECK(next_share > 0.4);
  CHECK(next_share < 0.6);
}

TEST_CASE("single-sentence corpus is a degenerate IsNext stream") {
  const std::vector<Document> docs = {{{"just", "one", "sentence"}}};
  const Vocab v = train_wordpiece(std::vector<std::vector<std::string>>{docs[0][0]}, 40);
  PretrainBatcher batcher(docs, v, PretrainOptions{}, 1);
  CHECK(batcher.degenerate());
  for (auto l : batcher.next().nsp_labels) CHECK(l == static_cast<std::int32_t>(NspLabel::IsNext));

  // One sentence per document: only random-other pairs exist.
  const std::vector<Document> singles = {{{"a", "b"}}, {{"c", "d"}}, {{"e", "f"}}};
  PretrainBatcher only_random(singles, v, PretrainOptions{}, 1);
  CHECK(only_random.degenerate());
  for (auto l : only_random.next().nsp_labels) CHECK(l == static_cast<std::int32_t>(NspLabel::NotNext));
}

TEST_CASE("pretrain emits one checkpoint when steps equal eval_every") {
  const auto sents = generate_fluent(60, 2);
  const auto docs = as_documents(sents, 4);
  std::vector<std::vector<std::string>> words(sents.begin(), sents.end());
  const Vocab v = train_wordpiece(words, 120);
  ModelConfig c = ModelConfig::make(1, 16, 2, v.size());
  c.max_positions = 64;
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.eval_every = 5;
  PretrainOptions opt;
  opt.batch_size = 4;
  opt.max_length = 64;
  const auto r = pretrain(init_checkpoint(c, 0), v, docs, 5, cfg, opt);
  REQUIRE(r.checkpoints.size() == 1);
  CHECK(r.checkpoints[0].first == 5);
  CHECK_THROWS_AS(pretrain(init_checkpoint(c, 0), v, docs, 4, cfg, opt), Error);
  const auto again = pretrain(init_checkpoint(c, 0), v, docs, 5, cfg, opt);
  CHECK(again.checkpoints[0].second == r.checkpoints[0].second);
}

TEST_CASE("snapshot probing keeps the best dev F1, earliest on ties") {
  const auto gold = testing::labeled(30, 2);
  const auto dev = testing::labeled(20, 3);
  const Vocab v = testing::vocab_for(gold, 150);
  const Checkpoint a = init_checkpoint(testing::tiny_config(v, 1, 16), 1);
  const Checkpoint b = init_checkpoint(testing::tiny_config(v, 1, 16), 2);
  TrainConfig probe;
  probe.learning_rate = 5e-3;
  probe.batch_size = 10;
  probe.epochs = 2;
  const std::vector<std::pair<std::size_t, Checkpoint>> snaps = {{10, a}, {20, b}, {30, a}};
  const auto r = probe_snapshots(snaps, v, gold, dev, probe);
  REQUIRE(r.dev_f1.size() == 3);
  CHECK(r.dev_f1[0] == r.dev_f1[2]);
  CHECK(r.best < 2);
  CHECK(r.dev_f1[r.best] == *std::max_element(r.dev_f1.begin(), r.dev_f1.end()));
  CHECK_THROWS_AS(probe_snapshots({}, v, gold, dev, probe), Error);
  CHECK_THROWS_AS(probe_snapshots(snaps, v, gold, {}, probe), Error);
}

TEST_CASE("pretraining beats the uniform predictor") {
  const auto sents = generate_fluent(1000, 4);
  const auto docs = as_documents(sents, 5);
  std::vector<std::vector<std::string>> words(sents.begin(), sents.end());
  const Vocab v = train_wordpiece(words, 1000);
  ModelConfig c = ModelConfig::make(2, 32, 2, v.size());
  c.max_positions = 64;
  TrainConfig cfg;
  cfg.learning_rate = 2e-3;
  cfg.eval_every = 100;
  PretrainOptions opt;
  opt.batch_size = 16;
  opt.max_length = 64;
  const auto r = pretrain(init_checkpoint(c, 0), v, docs, 2000, cfg, opt);
  const auto [mlm, nsp] = pretrain_loss(Model(r.checkpoints.back().second), v, docs, opt, 20, 99);
  CHECK(mlm < std::log(static_cast<double>(v.size())));
  CHECK(nsp < std::log(2.0) + 0.05);

  // 100-step moving average of the MLM loss trends down: each window is at
  // most slightly above the best window seen before it.
  std::vector<double> windows;
  for (const auto& h : r.history) {
    if (h.split == "mlm") windows.push_back(h.loss);
  }
  REQUIRE(windows.size() == 20);
  double best = windows[0];
  for (double w : windows) {
    CHECK(w <= best + 0.25);
    best = std::min(best, w);
  }
  CHECK(windows.back() < windows.front());
}

TEST_CASE("sweep argmax, determinism and tie-break") {
  SweepSpace space;
  space.learning_rate = {1e-4, 2e-4, 5e-4};
  space.batch_size = {8, 16};
  space.epochs = {5};
  space.silver_pct = {0.0, 0.7};
  CHECK(space.grid_size() == 12);
  const auto objective = [](const TrainConfig& c, double pct) {
    return std::round(10.0 * (c.learning_rate * 1000.0 + pct)) / 10.0;
  };
  const auto a = sweep(space, 6, 9, TrainConfig{}, objective);
  const auto b = sweep(space, 6, 9, TrainConfig{}, objective);
  CHECK(a.trials.size() == 6);
  CHECK(a.best == b.best);
  for (const auto& t : a.trials) CHECK(t.dev_f1 <= a.winner().dev_f1);
  for (std::size_t i = 0; i < a.best; ++i) CHECK(a.trials[i].dev_f1 < a.winner().dev_f1);

  SweepSpace one;
  one.learning_rate = {3e-4};
  one.batch_size = {4};
  one.epochs = {2};
  one.silver_pct = {0.5};
  const auto r = sweep(one, 10, 1, TrainConfig{}, objective);
  CHECK(r.trials.size() == 1);
  CHECK(r.winner().config.learning_rate == 3e-4);
  CHECK(r.winner().silver_pct == 0.5);
}
