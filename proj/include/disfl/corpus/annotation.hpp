// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace disfl {

/// Half-open word index range [begin, end).
struct WordRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return end <= begin; }
  bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
  friend bool operator==(const WordRange&, const WordRange&) = default;
};

/// One disfluency: reparandum, then an optional interregnum starting at the
/// interruption point, then an optional repair. The three parts are
/// contiguous when present.
struct DisfluencySpan {
  WordRange reparandum;
  std::optional<WordRange> interregnum;
  std::optional<WordRange> repair;

  std::size_t begin() const noexcept { return reparandum.begin; }
  std::size_t end() const noexcept;
  friend bool operator==(const DisfluencySpan&, const DisfluencySpan&) = default;
};

/// A transcript sentence with its disfluency structure.
///
/// `interregna` holds filler phrases written as `{ ... }` outside the
/// interruption point of any disfluency (e.g. a sentence-initial "{ well }").
/// They are labeled like interregna but carry no reparandum.
struct AnnotatedSentence {
  std::vector<std::string> words;
  std::vector<DisfluencySpan> spans;
  std::vector<WordRange> interregna;
  std::string doc_id;
  std::optional<std::string> speaker;
  std::optional<double> timestamp;

  bool disfluent() const noexcept { return !spans.empty() || !interregna.empty(); }
  friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;
};

/// Splits on ASCII whitespace.
std::vector<std::string> split_words(std::string_view text);

/// Parses bracket notation, e.g. "[ it's + { uh } it's ] almost".
///
/// Markers `[ + { } ]` must be whitespace-delimited. One level of nested
/// `[ ]` is kept as a separate span; disfluencies nested deeper are flattened
/// into their enclosing region (their words stay, their `+` is dropped and
/// their `{ }` become standalone interregna).
///
/// Throws Error{UnbalancedMarkers | MisplacedInterruptionPoint | EmptyReparandum}.
AnnotatedSentence parse_annotation(std::string_view text);

/// Inverse of parse_annotation on normalized whitespace.
std::string serialize_annotation(const AnnotatedSentence& sentence);

/// Puts spans and standalone interregna in canonical order
/// (spans by begin ascending then end descending; interregna by begin).
void canonicalize(AnnotatedSentence& sentence);

/// Checks index bounds, part contiguity, non-empty reparanda and that spans
/// are laminar (disjoint or nested). Throws Error{InvalidArgument}.
void validate(const AnnotatedSentence& sentence);

}  // namespace disfl
