// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "disfl/corpus/labels.hpp"
#include "disfl/corpus/synth.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/selftrain/mixing.hpp"
#include "disfl/selftrain/silver.hpp"
#include "disfl/tokenizer/vocab.hpp"
#include "disfl/training/trainer.hpp"

namespace disfl {

/// Fine-tuning driven by MixedBatchStream; selection by dev F1. With
/// silver_pct == 0 this is bit-identical to finetune() under the same seed.
TrainResult self_train(const Checkpoint& student_init, const Vocab& vocab, std::span<const LabeledSequence> gold,
                       const SilverCorpus& silver, std::span<const LabeledSequence> dev, const TrainConfig& config,
                       const MixPolicy& policy);

struct IterateResult {
  Checkpoint best;
  std::size_t best_round = 0;
  std::vector<double> round_dev_f1;
  // Word-level agreement between consecutive rounds' silver labels.
  std::vector<double> silver_agreement;
  std::vector<History> histories;
};

/// Round k: teacher_{k-1} labels `unlabeled`, then self_train from
/// `student_init` produces teacher_k. Returns the best dev-F1 teacher.
IterateResult iterate(const Checkpoint& teacher0, const Checkpoint& student_init, const Vocab& vocab,
                      std::span<const LabeledSequence> gold, std::span<const WordSequence> unlabeled,
                      std::span<const LabeledSequence> dev, const TrainConfig& config, const MixPolicy& policy,
                      std::size_t rounds);

}  // namespace disfl
