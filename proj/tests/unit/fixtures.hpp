// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

// Small synthetic corpora shared by the unit suites.

#pragma once

#include <vector>

#include "disfl/corpus/labels.hpp"
#include "disfl/corpus/preprocess.hpp"
#include "disfl/corpus/synth.hpp"
#include "disfl/model/config.hpp"
#include "disfl/tokenizer/vocab.hpp"
#include "disfl/tokenizer/wordpiece.hpp"

namespace disfl::testing {

inline std::vector<LabeledSequence> labeled(std::size_t n, std::uint64_t seed, double p_disfluent = 0.6,
                                            SynthParams p = {}) {
  p.seed = seed;
  p.p_disfluent = p_disfluent;
  std::vector<LabeledSequence> out;
  for (const auto& s : generate_synthetic(generate_fluent(n, seed + 1000), p)) {
    auto l = to_labels(preprocess(s), LabelScheme::ReparandumPlusInterregnum, Origin::Synthetic);
    if (!l.words.empty()) out.push_back(std::move(l));
  }
  return out;
}

inline Vocab vocab_for(const std::vector<LabeledSequence>& corpus, std::size_t size) {
  std::vector<std::vector<std::string>> words;
  for (const auto& s : corpus) words.push_back(s.words);
  return train_wordpiece(words, size);
}

inline ModelConfig tiny_config(const Vocab& v, std::size_t layers = 2, std::size_t hidden = 32) {
  ModelConfig c = ModelConfig::make(layers, hidden, 2, v.size());
  c.max_positions = 64;
  return c;
}

}  // namespace disfl::testing
