// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "disfl/corpus/labels.hpp"
#include "disfl/corpus/synth.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/tokenizer/vocab.hpp"

namespace disfl {

struct SilverCorpus {
  std::vector<LabeledSequence> sequences;
  // Digest of the teacher checkpoint.
  std::string teacher_id;
  // Mean over words of the teacher's max class probability.
  double mean_confidence = 0.0;
  // Free-form creation parameters (JSON object text), persisted in the sidecar.
  std::string parameters = "{}";

  /// Throws ProvenanceViolation if any sequence is not silver, InvalidArgument
  /// if teacher_id is empty.
  void validate() const;
};

/// Hard argmax tags from the teacher's first-subword logits, one sequence per
/// input sentence (fluent predictions included). Throws VocabMismatch when
/// the teacher was trained with another vocabulary.
SilverCorpus label_silver(const Checkpoint& teacher, const Vocab& vocab, std::span<const WordSequence> unlabeled);
SilverCorpus label_silver(const Model& teacher, const std::string& teacher_id, const Vocab& vocab,
                          std::span<const WordSequence> unlabeled);

/// Writes the token-label TSV at `path` and metadata at `path` + ".meta.json".
void save_silver(const SilverCorpus& silver, const std::filesystem::path& path);
SilverCorpus load_silver(const std::filesystem::path& path);
std::filesystem::path silver_meta_path(const std::filesystem::path& path);

/// Fraction of words carrying the same tag in both corpora (1 for no words).
/// Throws AlignmentMismatch when the corpora are not over the same sentences.
double label_agreement(const SilverCorpus& a, const SilverCorpus& b);

}  // namespace disfl
