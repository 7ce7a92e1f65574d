// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disfl/tokenizer/vocab.hpp"

namespace disfl {

/// Words longer than this (in code points) map to [UNK].
inline constexpr std::size_t kMaxWordChars = 100;

/// Lowercased form used for both training and lookup.
std::string normalize_word(std::string_view word);

/// Splits UTF-8 into code points; invalid bytes are kept as single units.
std::vector<std::string> utf8_chars(std::string_view text);

/// Learns a WordPiece vocabulary by greedy pair merging.
///
/// Starts from every corpus character in both word-initial and "##" forms,
/// then repeatedly merges the adjacent pair with the highest likelihood gain
/// count(ab) / (count(a) * count(b)) until `vocab_size` tokens exist or no
/// pair occurs at least `min_frequency` times.
///
/// Throws Error{VocabTooSmall} if the specials plus alphabet do not fit.
Vocab train_wordpiece(std::span<const std::vector<std::string>> corpus, std::size_t vocab_size,
                      std::size_t min_frequency = 1);

/// Greedy longest-match-first segmentation of one word. A word that cannot be
/// segmented becomes a single [UNK].
std::vector<TokenId> tokenize(std::string_view word, const Vocab& vocab);

/// Joins pieces of one word, dropping "##" continuation prefixes.
std::string detokenize(std::span<const TokenId> ids, const Vocab& vocab);

}  // namespace disfl
