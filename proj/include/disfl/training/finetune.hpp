// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "disfl/corpus/labels.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/tokenizer/vocab.hpp"
#include "disfl/training/trainer.hpp"

namespace disfl {

/// Gold-only fine-tuning. One epoch is ceil(|gold| / batch_size) steps over a
/// seeded cyclic shuffle. epochs == 0 returns `init` with an empty history.
TrainResult finetune(const Checkpoint& init, const Vocab& vocab, std::span<const LabeledSequence> gold,
                     std::span<const LabeledSequence> dev, const TrainConfig& config);

}  // namespace disfl
