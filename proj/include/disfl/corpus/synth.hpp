// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "disfl/corpus/annotation.hpp"

namespace disfl {

enum class DisfluencyType : std::uint8_t { Repetition = 0, Restart = 1, InterregnumInsert = 2, FilledPauseInsert = 3 };
inline constexpr std::size_t kNumDisfluencyTypes = 4;

using WordSequence = std::vector<std::string>;
/// A document is an ordered list of sentences.
using Document = std::vector<WordSequence>;

struct SynthParams {
  double p_disfluent = 0.5;
  // Indexed by DisfluencyType.
  std::array<double, kNumDisfluencyTypes> type_weights{0.55, 0.15, 0.2, 0.1};
  std::size_t max_reparandum_len = 3;
  // Probability of each further edit after the first (at most kMaxEdits).
  double p_extra_edit = 0.25;
  std::uint64_t seed = 0;

  static constexpr std::size_t kMaxEdits = 3;
  void validate() const;
};

const std::vector<std::string>& interregnum_phrases();

/// Inserts simulated disfluencies into fluent sentences. Sentence i uses an
/// RNG stream derived from (seed, i), so output does not depend on how the
/// work is sharded. Throws Error{EmptyInputCorpus} for an empty input.
std::vector<AnnotatedSentence> generate_synthetic(std::span<const WordSequence> fluent, const SynthParams& params);

/// Fluent conversational sentences from a small topic grammar. Sentences in
/// one document share a topic, so adjacent sentences are more related than
/// sentences from different documents.
std::vector<Document> generate_fluent_documents(std::size_t num_docs, std::size_t sentences_per_doc,
                                                std::uint64_t seed);

/// Flattened generate_fluent_documents with ten sentences per document.
std::vector<WordSequence> generate_fluent(std::size_t count, std::uint64_t seed);

}  // namespace disfl
