// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/tokenizer/encode.hpp"

#include <algorithm>

#include "disfl/error.hpp"
#include "disfl/tokenizer/wordpiece.hpp"

namespace disfl {

std::size_t Encoding::length() const noexcept {
  return static_cast<std::size_t>(std::count(attention_mask.begin(), attention_mask.end(), std::uint8_t{1}));
}

namespace {

void push(Encoding& e, TokenId id, std::int32_t word, std::uint8_t mask) {
  e.ids.push_back(id);
  e.word_index.push_back(word);
  e.attention_mask.push_back(mask);
  e.segment_ids.push_back(0);
}

struct Encoded {
  Encoding encoding;
  std::size_t kept_words = 0;
};

Encoded encode_impl(std::span<const std::string> words, const Vocab& vocab, std::size_t max_positions,
                    std::size_t pad_to) {
  if (max_positions < 2) throw Error(ErrorCode::InvalidArgument, "max_positions must be >= 2");
  Encoded out;
  Encoding& e = out.encoding;
  push(e, Vocab::kCls, kNoWord, 1);
  const std::size_t budget = max_positions - 2;
  std::size_t used = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto pieces = tokenize(words[w], vocab);
    if (used + pieces.size() > budget) break;
    for (TokenId id : pieces) push(e, id, static_cast<std::int32_t>(w), 1);
    used += pieces.size();
    out.kept_words = w + 1;
  }
  push(e, Vocab::kSep, kNoWord, 1);
  while (e.size() < pad_to) push(e, Vocab::kPad, kNoWord, 0);
  return out;
}

EncodedSequence label(const LabeledSequence& seq, Encoded enc) {
  if (seq.words.size() != seq.tags.size()) {
    throw Error(ErrorCode::ShapeMismatch, "words and tags differ in length");
  }
  EncodedSequence out;
  out.num_words = seq.words.size();
  out.kept_words = enc.kept_words;
  out.encoding = std::move(enc.encoding);
  out.tags.reserve(out.encoding.size());
  for (std::int32_t w : out.encoding.word_index) {
    out.tags.push_back(w == kNoWord ? kIgnoreTag : static_cast<std::int32_t>(seq.tags[static_cast<std::size_t>(w)]));
  }
  return out;
}

}  // namespace

Encoding encode_words(std::span<const std::string> words, const Vocab& vocab, std::size_t max_positions,
                      std::size_t pad_to) {
  return encode_impl(words, vocab, max_positions, pad_to).encoding;
}

EncodedSequence encode(const LabeledSequence& seq, const Vocab& vocab, std::size_t max_positions) {
  return label(seq, encode_impl(seq.words, vocab, max_positions, max_positions));
}

EncodedSequence encode_unpadded(const LabeledSequence& seq, const Vocab& vocab, std::size_t max_positions) {
  return label(seq, encode_impl(seq.words, vocab, max_positions, 0));
}

Batch make_batch(std::span<const EncodedSequence* const> seqs, std::size_t pad_to) {
  Batch b;
  b.batch = seqs.size();
  std::size_t longest = 0;
  for (const auto* s : seqs) longest = std::max(longest, s->encoding.length());
  b.length = std::max(pad_to, longest);
  const std::size_t n = b.positions();
  b.ids.assign(n, Vocab::kPad);
  b.segments.assign(n, 0);
  b.mask.assign(n, 0);
  b.tags.assign(n, kIgnoreTag);
  b.word_index.assign(n, kNoWord);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const auto& e = seqs[i]->encoding;
    const std::size_t len = e.length();
    const std::size_t base = i * b.length;
    std::copy_n(e.ids.begin(), len, b.ids.begin() + static_cast<std::ptrdiff_t>(base));
    std::copy_n(e.segment_ids.begin(), len, b.segments.begin() + static_cast<std::ptrdiff_t>(base));
    std::copy_n(e.attention_mask.begin(), len, b.mask.begin() + static_cast<std::ptrdiff_t>(base));
    std::copy_n(e.word_index.begin(), len, b.word_index.begin() + static_cast<std::ptrdiff_t>(base));
    if (!seqs[i]->tags.empty()) {
      std::copy_n(seqs[i]->tags.begin(), len, b.tags.begin() + static_cast<std::ptrdiff_t>(base));
    }
  }
  return b;
}

Batch make_batch(std::span<const EncodedSequence> seqs, std::size_t pad_to) {
  std::vector<const EncodedSequence*> ptrs;
  ptrs.reserve(seqs.size());
  for (const auto& s : seqs) ptrs.push_back(&s);
  return make_batch(std::span<const EncodedSequence* const>(ptrs), pad_to);
}

std::vector<Tag> first_subword_readout(std::span<const std::int32_t> word_index,
                                       std::span<const std::int32_t> token_tags, std::size_t num_words) {
  if (word_index.size() != token_tags.size()) {
    throw Error(ErrorCode::ShapeMismatch, "word_index and token tags differ in length");
  }
  std::vector<Tag> out(num_words, Tag::O);
  std::vector<bool> seen(num_words, false);
  for (std::size_t t = 0; t < word_index.size(); ++t) {
    const std::int32_t w = word_index[t];
    if (w < 0 || static_cast<std::size_t>(w) >= num_words || seen[static_cast<std::size_t>(w)]) continue;
    seen[static_cast<std::size_t>(w)] = true;
    const std::int32_t tag = token_tags[t];
    if (tag >= 0 && static_cast<std::size_t>(tag) < kNumTags) out[static_cast<std::size_t>(w)] = static_cast<Tag>(tag);
  }
  return out;
}

}  // namespace disfl
