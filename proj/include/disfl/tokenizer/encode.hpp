// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "disfl/corpus/labels.hpp"
#include "disfl/tokenizer/vocab.hpp"

namespace disfl {

/// Tag value for positions excluded from loss and metrics.
inline constexpr std::int32_t kIgnoreTag = -100;
/// word_index value for specials and padding.
inline constexpr std::int32_t kNoWord = -1;

struct Encoding {
  std::vector<TokenId> ids;
  std::vector<std::int32_t> word_index;
  std::vector<std::uint8_t> attention_mask;
  std::vector<TokenId> segment_ids;

  std::size_t size() const noexcept { return ids.size(); }
  /// Number of non-PAD positions.
  std::size_t length() const noexcept;
};

struct EncodedSequence {
  Encoding encoding;
  std::vector<std::int32_t> tags;
  /// Words that survived truncation (a prefix of the input words).
  std::size_t kept_words = 0;
  std::size_t num_words = 0;
};

/// [CLS] w1 ... [SEP] padded to `pad_to` positions (0 means no padding).
/// Whole words are kept while they fit into max_positions - 2 tokens.
Encoding encode_words(std::span<const std::string> words, const Vocab& vocab, std::size_t max_positions,
                      std::size_t pad_to = 0);

/// Encodes a labeled sentence; every subword inherits its word's tag and
/// specials/pads carry kIgnoreTag. Pads to max_positions.
EncodedSequence encode(const LabeledSequence& seq, const Vocab& vocab, std::size_t max_positions);

/// Same as encode() but without padding; batching pads to the batch maximum.
EncodedSequence encode_unpadded(const LabeledSequence& seq, const Vocab& vocab, std::size_t max_positions);

/// Dense right-padded batch, row-major [batch, length].
struct Batch {
  std::size_t batch = 0;
  std::size_t length = 0;
  std::vector<TokenId> ids;
  std::vector<TokenId> segments;
  std::vector<std::uint8_t> mask;
  std::vector<std::int32_t> tags;
  std::vector<std::int32_t> word_index;

  std::size_t positions() const noexcept { return batch * length; }
};

/// Pads each sequence to `pad_to`, or to the longest member when pad_to is 0.
Batch make_batch(std::span<const EncodedSequence* const> seqs, std::size_t pad_to = 0);
Batch make_batch(std::span<const EncodedSequence> seqs, std::size_t pad_to = 0);

/// Word-level tags from per-token predictions using the first subword of each
/// word. Words cut by truncation are read out as O.
std::vector<Tag> first_subword_readout(std::span<const std::int32_t> word_index,
                                       std::span<const std::int32_t> token_tags, std::size_t num_words);

}  // namespace disfl
