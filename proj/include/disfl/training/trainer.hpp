// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "disfl/corpus/labels.hpp"
#include "disfl/metrics/prf.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/rng.hpp"
#include "disfl/tokenizer/encode.hpp"
#include "disfl/tokenizer/vocab.hpp"
#include "disfl/training/adam.hpp"
#include "disfl/training/history.hpp"

namespace disfl {

struct TrainConfig {
  double learning_rate = 2e-4;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  Schedule schedule = Schedule::LinearToZero;
  double weight_decay = 0.01;
  std::uint64_t seed = 0;
  // Steps between dev evaluations; 0 evaluates once per epoch.
  std::size_t eval_every = 0;

  void validate() const;
  AdamConfig adam() const;
  std::string to_json() const;
  static TrainConfig from_json(const std::string& text);
};

/// Endless index stream over [0, n): a fresh seeded permutation per pass.
class CyclicSampler {
 public:
  CyclicSampler(std::size_t n, std::uint64_t seed);
  std::size_t next();
  std::size_t passes() const noexcept { return passes_; }

 private:
  void refill();

  std::size_t n_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
  std::size_t passes_ = 0;
  Rng rng_;
};

/// Independent seeded streams of one training run.
enum class Stream : std::uint64_t { Gold = 1, Silver = 2, Dropout = 3, Masking = 4, Pairs = 5 };
std::uint64_t stream_seed(std::uint64_t seed, Stream s);

struct TrainResult {
  Checkpoint best;
  History history;
  double best_dev_f1 = 0.0;
  std::size_t best_step = 0;
  std::size_t steps = 0;
};

/// Returns indices into the training pool for the next batch.
using BatchPlanner = std::function<std::vector<std::size_t>()>;

struct TrainPlan {
  std::span<const EncodedSequence> pool;
  BatchPlanner next_batch;
  std::size_t steps_per_epoch = 0;
  // Recorded in history; negative for plain fine-tuning.
  double silver_pct = -1.0;
};

/// Shared token-classification loop: AdamW under the configured schedule,
/// dev evaluation every eval_every steps (or per epoch) and at the last step,
/// and the checkpoint with the highest dev F1 kept. An empty dev set keeps the
/// final parameters. Throws ProvenanceViolation if dev holds silver data and
/// VocabMismatch if `init` was built for another vocabulary.
TrainResult train_tagger(const Checkpoint& init, const Vocab& vocab, const TrainPlan& plan,
                         std::span<const LabeledSequence> dev, const TrainConfig& config);

std::vector<EncodedSequence> encode_corpus(std::span<const LabeledSequence> corpus, const Vocab& vocab,
                                           std::size_t max_positions);

/// Word-level P/R/F1 of the model's predictions against `gold`.
EvalReport evaluate(const Model& model, const Vocab& vocab, std::span<const LabeledSequence> gold);

/// Throws ProvenanceViolation if any sequence is silver.
void require_no_silver(std::span<const LabeledSequence> eval_set, const std::string& what);

}  // namespace disfl
