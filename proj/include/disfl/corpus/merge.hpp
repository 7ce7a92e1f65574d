// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace disfl {

struct Turn {
  std::string speaker;
  double start = 0.0;  // seconds
  std::string text;
};

struct MergedUtterance {
  std::string speaker;
  double start = 0.0;  // timestamp of the first component turn
  std::vector<std::string> words;
};

struct MergeOptions {
  double max_gap = 5.0;       // seconds between consecutive same-speaker turn starts
  std::size_t max_len = 128;  // words per merged utterance
};

/// Joins each speaker's consecutive turns when they are separated only by
/// other speakers' interjections or pauses no longer than max_gap. Output is
/// ordered by first-component timestamp. Turns must be sorted by start time
/// (Error{UnsortedInput} otherwise).
std::vector<MergedUtterance> merge_utterances(std::span<const Turn> turns, const MergeOptions& options = {});

/// Rule-based sentence splitter: a boundary follows `.`, `!` or `?` when the
/// next non-space character is an uppercase letter.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace disfl
