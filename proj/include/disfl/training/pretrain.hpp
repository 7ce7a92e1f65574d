// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "disfl/corpus/synth.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/tokenizer/encode.hpp"
#include "disfl/tokenizer/vocab.hpp"
#include "disfl/training/trainer.hpp"

namespace disfl {

enum class NspLabel : std::int32_t { IsNext = 0, NotNext = 1 };

struct PretrainBatch {
  Batch batch;
  // Flat indices b * length + t, ascending.
  std::vector<std::size_t> masked_positions;
  // Original token id at each masked position.
  std::vector<std::int32_t> mlm_targets;
  std::vector<std::int32_t> nsp_labels;
};

struct PretrainOptions {
  double mask_prob = 0.15;
  std::size_t max_length = 128;
  std::size_t batch_size = 32;
  // Loss logging interval in steps; 0 logs at each snapshot.
  std::size_t log_every = 0;
};

/// Seeded stream of [CLS] A [SEP] B [SEP] pairs with segments 0/1. Half the
/// pairs use the true next sentence of A's document, half a random sentence
/// of another document. Each non-special token is selected with mask_prob and
/// then replaced by [MASK] (80%), a random token (10%) or kept (10%).
/// When one of the two pair kinds cannot be built (a single document, or no
/// document with two sentences) only the other kind is emitted and
/// degenerate() is set.
class PretrainBatcher {
 public:
  PretrainBatcher(std::span<const Document> docs, const Vocab& vocab, const PretrainOptions& options,
                  std::uint64_t seed);

  PretrainBatch next();
  bool degenerate() const noexcept { return degenerate_; }

 private:
  std::vector<std::vector<TokenId>> sentences_;
  std::vector<std::size_t> doc_of_;
  std::vector<std::size_t> with_next_;
  std::vector<std::pair<std::size_t, std::size_t>> doc_ranges_;
  const Vocab& vocab_;
  PretrainOptions options_;
  bool can_next_ = false;
  bool can_random_ = false;
  bool degenerate_ = false;
  Rng pairs_;
  Rng masking_;
};

struct PretrainResult {
  // (step, checkpoint) every eval_every steps.
  std::vector<std::pair<std::size_t, Checkpoint>> checkpoints;
  History history;
  bool degenerate = false;
};

/// Joint MLM + NSP training (unweighted sum) for `steps` steps under
/// config's schedule, snapshotting every config.eval_every steps (0 means
/// only at the end).
PretrainResult pretrain(const Checkpoint& init, const Vocab& vocab, std::span<const Document> docs, std::size_t steps,
                        const TrainConfig& config, const PretrainOptions& options = {});

/// Mean MLM and NSP loss over `batches` fixed batches drawn with `seed`.
std::pair<double, double> pretrain_loss(const Model& model, const Vocab& vocab, std::span<const Document> docs,
                                        const PretrainOptions& options, std::size_t batches, std::uint64_t seed);

struct ProbeResult {
  // Index into the snapshot list (earliest on ties).
  std::size_t best = 0;
  std::vector<double> dev_f1;
};

/// Snapshot selection: fine-tunes every snapshot on `gold` under the short
/// `probe` budget and keeps the one with the highest dev F1.
ProbeResult probe_snapshots(std::span<const std::pair<std::size_t, Checkpoint>> snapshots, const Vocab& vocab,
                            std::span<const LabeledSequence> gold, std::span<const LabeledSequence> dev,
                            const TrainConfig& probe);

}  // namespace disfl
