// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disfl/corpus/annotation.hpp"

namespace disfl {

/// Flat per-word tag. Numeric values double as classifier class indices.
enum class Tag : std::uint8_t { O = 0, RM = 1, IM = 2 };
inline constexpr std::size_t kNumTags = 3;

std::string_view to_string(Tag tag);
std::optional<Tag> parse_tag(std::string_view text);

enum class LabelScheme { ReparandumOnly, ReparandumPlusInterregnum };

std::string_view to_string(LabelScheme scheme);
/// Accepts "reparandum-only" and "reparandum-interregnum".
LabelScheme parse_scheme(std::string_view text);

enum class Origin { Gold, Silver, Synthetic };

std::string_view to_string(Origin origin);

struct LabeledSequence {
  std::vector<std::string> words;
  std::vector<Tag> tags;
  Origin origin = Origin::Gold;
  std::string doc_id;

  friend bool operator==(const LabeledSequence&, const LabeledSequence&) = default;
};

/// Reparandum words become RM; interregnum words IM (or O under
/// ReparandumOnly); everything else, including repairs, O.
LabeledSequence to_labels(const AnnotatedSentence& sentence, LabelScheme scheme, Origin origin = Origin::Gold);

/// Replaces IM with O.
LabeledSequence restrict_to_scheme(LabeledSequence seq, LabelScheme scheme);

/// Column order follows the usual dataset-statistics table.
struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t docs = 0;
  std::size_t words = 0;
  std::size_t disfluent_sentences = 0;
  std::size_t disfluent_spans = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Number of maximal runs of non-O tags.
std::size_t count_spans(std::span<const Tag> tags);

/// `docs` counts distinct doc_id values (the empty id counts as one document).
CorpusStats stats(std::span<const LabeledSequence> corpus);

}  // namespace disfl
