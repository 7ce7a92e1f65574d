// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "disfl/corpus/labels.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/tokenizer/vocab.hpp"

namespace disfl {

struct TaggedSentence {
  std::vector<Tag> tags;
  // Per word: max class probability at the word's first subword.
  std::vector<float> confidence;
};

/// Word-level argmax tags via first-subword readout, in input order.
/// Throws VocabMismatch if the model records a different vocabulary digest.
std::vector<TaggedSentence> tag_sentences(const Model& model, const Vocab& vocab,
                                          std::span<const std::vector<std::string>> sentences,
                                          std::size_t batch_size = 32);

/// Convenience: tags every sequence of `corpus` and returns copies carrying
/// the predicted tags (words, doc ids and origin preserved).
std::vector<LabeledSequence> predict_labels(const Model& model, const Vocab& vocab,
                                            std::span<const LabeledSequence> corpus, std::size_t batch_size = 32);

}  // namespace disfl
