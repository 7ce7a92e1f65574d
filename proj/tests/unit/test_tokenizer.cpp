// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <set>

#include "disfl/corpus/synth.hpp"
#include "disfl/error.hpp"
#include "disfl/tokenizer/encode.hpp"
#include "disfl/tokenizer/vocab.hpp"
#include "disfl/tokenizer/wordpiece.hpp"
#include "doctest.h"

using namespace disfl;

namespace {

std::vector<std::vector<std::string>> tiny_corpus() { return {{"aaab", "aab"}}; }

TokenId id(const Vocab& v, std::string_view tok) {
  const auto i = v.find(tok);
  REQUIRE(i);
  return *i;
}

LabeledSequence seq(std::vector<std::string> words, std::vector<Tag> tags) {
  LabeledSequence s;
  s.words = std::move(words);
  s.tags = std::move(tags);
  return s;
}

}  // namespace

TEST_CASE("wordpiece on a two-word corpus") {
  const auto corpus = tiny_corpus();
  const Vocab v = train_wordpiece(corpus, 10);
  CHECK(v.size() <= 10);
  for (const char* t : {"a", "b", "##a", "##b"}) CHECK(v.find(t));
  CHECK(v.size() > Vocab::kNumSpecials + 4);
  for (const auto& w : corpus[0]) {
    const auto ids = tokenize(w, v);
    CHECK(detokenize(ids, v) == w);
    CHECK(std::find(ids.begin(), ids.end(), Vocab::kUnk) == ids.end());
  }
  CHECK(tokenize("aaab", v) == tokenize("aaab", train_wordpiece(corpus, 10)));
}

TEST_CASE("vocab sized to the alphabet is character-level") {
  const auto corpus = tiny_corpus();
  const Vocab v = train_wordpiece(corpus, Vocab::kNumSpecials + 4);
  CHECK(v.size() == Vocab::kNumSpecials + 4);
  CHECK(tokenize("aab", v).size() == 3);
  CHECK_THROWS_AS(train_wordpiece(corpus, Vocab::kNumSpecials + 2), Error);
}

TEST_CASE("tokenize edge cases") {
  const std::vector<std::vector<std::string>> corpus = {{"the", "cat", "sat", "the", "the", "cat"}};
  const Vocab v = train_wordpiece(corpus, 40);
  REQUIRE(v.find("the"));
  CHECK(tokenize("the", v) == std::vector<TokenId>{id(v, "the")});
  CHECK(tokenize("thz", v) == std::vector<TokenId>{Vocab::kUnk});
  CHECK(tokenize(std::string(kMaxWordChars + 1, 't'), v) == std::vector<TokenId>{Vocab::kUnk});
}

TEST_CASE("round-trip over a synthetic corpus") {
  const auto corpus = generate_fluent(400, 1);
  const Vocab v = train_wordpiece(corpus, 300);
  std::set<std::string> seen;
  for (const auto& s : corpus) {
    for (const auto& w : s) {
      if (!seen.insert(w).second) continue;
      CHECK(detokenize(tokenize(w, v), v) == normalize_word(w));
    }
  }
}

TEST_CASE("vocab save and load preserve ids and digest") {
  const Vocab v = train_wordpiece(generate_fluent(100, 2), 120);
  const auto path = std::filesystem::temp_directory_path() / "disfl_vocab_test.txt";
  v.save(path);
  const Vocab w = Vocab::load(path);
  CHECK(w.tokens() == v.tokens());
  CHECK(w.digest() == v.digest());
  std::filesystem::remove(path);
}

TEST_CASE("encode layout") {
  const Vocab v = train_wordpiece(std::vector<std::vector<std::string>>{{"a", "b"}}, 9);
  const auto e = encode(seq({"a"}, {Tag::RM}), v, 4);
  CHECK(e.encoding.ids == std::vector<TokenId>{Vocab::kCls, id(v, "a"), Vocab::kSep, Vocab::kPad});
  CHECK(e.tags == std::vector<std::int32_t>{kIgnoreTag, 1, kIgnoreTag, kIgnoreTag});
  CHECK(e.encoding.attention_mask == std::vector<std::uint8_t>{1, 1, 1, 0});
}

TEST_CASE("subwords inherit the word tag") {
  const auto corpus = tiny_corpus();
  const Vocab v = train_wordpiece(corpus, Vocab::kNumSpecials + 4);
  const auto e = encode_unpadded(seq({"aab"}, {Tag::IM}), v, 16);
  CHECK(e.tags == std::vector<std::int32_t>{kIgnoreTag, 2, 2, 2, kIgnoreTag});
  CHECK(e.encoding.word_index == std::vector<std::int32_t>{kNoWord, 0, 0, 0, kNoWord});
}

TEST_CASE("truncation keeps max_positions - 2 words") {
  const Vocab v = train_wordpiece(std::vector<std::vector<std::string>>{{"w"}}, 7);
  std::vector<std::string> words(600, "w");
  const auto e = encode(seq(words, std::vector<Tag>(600, Tag::O)), v, 512);
  CHECK(e.kept_words == 510);
  CHECK(e.num_words == 600);
  CHECK(e.encoding.size() == 512);
  CHECK(e.encoding.length() == 512);
}

TEST_CASE("encoding invariants and oracle readout") {
  const auto corpus = generate_fluent(200, 3);
  for (std::size_t vs : {60, 120, 400}) {
    const Vocab v = train_wordpiece(corpus, vs);
    for (std::size_t i = 0; i < 50; ++i) {
      std::vector<Tag> tags;
      for (std::size_t j = 0; j < corpus[i].size(); ++j) tags.push_back(static_cast<Tag>((i + j) % 3));
      const auto e = encode(seq(corpus[i], tags), v, 24);
      CHECK(e.encoding.size() <= 24);
      for (std::size_t t = 0; t < e.encoding.size(); ++t) {
        CHECK((e.encoding.attention_mask[t] == 1) == (e.encoding.ids[t] != Vocab::kPad));
      }
      // An oracle emitting the gold subword tags reads out the gold word tags
      // for every kept word, whatever the segmentation.
      const auto words = first_subword_readout(e.encoding.word_index, e.tags, e.num_words);
      REQUIRE(words.size() == e.num_words);
      for (std::size_t w = 0; w < e.kept_words; ++w) CHECK(words[w] == tags[w]);
    }
  }
}

TEST_CASE("make_batch pads to the longest sequence") {
  const Vocab v = train_wordpiece(std::vector<std::vector<std::string>>{{"a", "b"}}, 9);
  std::vector<EncodedSequence> seqs = {encode_unpadded(seq({"a"}, {Tag::O}), v, 16),
                                       encode_unpadded(seq({"a", "b", "a"}, {Tag::O, Tag::RM, Tag::O}), v, 16)};
  const Batch b = make_batch(seqs);
  CHECK(b.batch == 2);
  CHECK(b.length == 5);
  CHECK(b.mask == std::vector<std::uint8_t>{1, 1, 1, 0, 0, 1, 1, 1, 1, 1});
  CHECK(b.tags[3] == kIgnoreTag);
  CHECK(make_batch(seqs, 8).length == 8);
}
