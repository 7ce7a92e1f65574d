// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <sstream>

#include "disfl/corpus/annotation.hpp"
#include "disfl/corpus/io.hpp"
#include "disfl/corpus/labels.hpp"
#include "disfl/corpus/merge.hpp"
#include "disfl/corpus/preprocess.hpp"
#include "disfl/corpus/synth.hpp"
#include "disfl/error.hpp"
#include "doctest.h"

using namespace disfl;

namespace {

using Words = std::vector<std::string>;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

std::vector<Tag> tags(std::initializer_list<Tag> t) { return t; }

constexpr Tag O = Tag::O, RM = Tag::RM, IM = Tag::IM;

}  // namespace

TEST_CASE("parse: repair with interregnum") {
  const auto s = parse_annotation("[ it's + { uh } it's ] almost");
  CHECK(s.words == Words{"it's", "uh", "it's", "almost"});
  REQUIRE(s.spans.size() == 1);
  CHECK(s.spans[0].reparandum == WordRange{0, 1});
  REQUIRE(s.spans[0].interregnum);
  CHECK(*s.spans[0].interregnum == WordRange{1, 2});
  REQUIRE(s.spans[0].repair);
  CHECK(*s.spans[0].repair == WordRange{2, 3});
}

TEST_CASE("parse: restart without repair") {
  const auto s = parse_annotation("[ By + ] it was attached to");
  CHECK(s.words == Words{"By", "it", "was", "attached", "to"});
  REQUIRE(s.spans.size() == 1);
  CHECK(s.spans[0].reparandum == WordRange{0, 1});
  CHECK_FALSE(s.spans[0].interregnum);
  CHECK_FALSE(s.spans[0].repair);
}

TEST_CASE("parse: fluent and multi-word spans") {
  const auto f = parse_annotation("hello world");
  CHECK(f.words == Words{"hello", "world"});
  CHECK(f.spans.empty());
  CHECK_FALSE(f.disfluent());

  const auto s = parse_annotation("[ was it, + { I mean, } did you ] put");
  REQUIRE(s.spans.size() == 1);
  CHECK(s.spans[0].reparandum == WordRange{0, 2});
  CHECK(*s.spans[0].interregnum == WordRange{2, 4});
  CHECK(*s.spans[0].repair == WordRange{4, 6});
}

TEST_CASE("parse: malformed input") {
  CHECK(code_of([] { parse_annotation("[ a + b"); }) == ErrorCode::UnbalancedMarkers);
  CHECK(code_of([] { parse_annotation("a ] b"); }) == ErrorCode::UnbalancedMarkers);
  CHECK(code_of([] { parse_annotation("[ + b ]"); }) == ErrorCode::EmptyReparandum);
  CHECK(code_of([] { parse_annotation("a + b"); }) == ErrorCode::MisplacedInterruptionPoint);
}

TEST_CASE("parse: nested spans round-trip") {
  const std::string text = "[ [ i + i ] + i ] went home";
  const auto s = parse_annotation(text);
  CHECK(s.spans.size() == 2);
  CHECK(parse_annotation(serialize_annotation(s)) == s);
}

TEST_CASE("preprocess: filled pauses and commas") {
  const auto s = preprocess(parse_annotation("[ it's + { uh } it's ] almost"));
  CHECK(s.words == Words{"it's", "it's", "almost"});
  REQUIRE(s.spans.size() == 1);
  CHECK(s.spans[0].reparandum == WordRange{0, 1});
  CHECK_FALSE(s.spans[0].interregnum);
  CHECK(*s.spans[0].repair == WordRange{1, 2});

  AnnotatedSentence w;
  w.words = {"well,", "you", "know"};
  CHECK(preprocess(w).words == Words{"well", "you", "know"});

  AnnotatedSentence um;
  um.words = {"um"};
  const auto e = preprocess(um);
  CHECK(e.words.empty());
  CHECK(e.spans.empty());
}

TEST_CASE("preprocess: filled pauses compare case-insensitively") {
  AnnotatedSentence s;
  s.words = {"Uh,", "UM", "yes"};
  CHECK(preprocess(s).words == Words{"yes"});
}

TEST_CASE("preprocess: emptied reparandum drops the span") {
  const auto s = preprocess(parse_annotation("[ uh + we ] went"));
  CHECK(s.words == Words{"we", "went"});
  CHECK(s.spans.empty());
}

TEST_CASE("to_labels under both schemes") {
  const auto s = parse_annotation("[ was it + { I mean } did you ] put");
  CHECK(to_labels(s, LabelScheme::ReparandumPlusInterregnum).tags == tags({RM, RM, IM, IM, O, O, O}));
  CHECK(to_labels(s, LabelScheme::ReparandumOnly).tags == tags({RM, RM, O, O, O, O, O}));
  CHECK(to_labels(parse_annotation("a b c"), LabelScheme::ReparandumPlusInterregnum).tags == tags({O, O, O}));
}

TEST_CASE("standalone interregnum is labeled IM") {
  const auto s = parse_annotation("i { you know } went");
  CHECK(to_labels(s, LabelScheme::ReparandumPlusInterregnum).tags == tags({O, IM, IM, O}));
}

TEST_CASE("merge_utterances") {
  const std::vector<Turn> turns = {{"A", 0, "i went"}, {"B", 1, "uh-huh"}, {"A", 2, "to the store"}};
  const auto m = merge_utterances(turns);
  REQUIRE(m.size() == 2);
  CHECK(m[0].speaker == "A");
  CHECK(m[0].words == Words{"i", "went", "to", "the", "store"});
  CHECK(m[1].words == Words{"uh-huh"});

  const std::vector<Turn> one = {{"A", 0, "hi there"}};
  CHECK(merge_utterances(one).size() == 1);

  const std::vector<Turn> gap = {{"A", 0, "first"}, {"A", 9, "second"}};
  CHECK(merge_utterances(gap).size() == 2);

  const std::vector<Turn> unsorted = {{"A", 3, "x"}, {"A", 1, "y"}};
  CHECK(code_of([&] { merge_utterances(unsorted); }) == ErrorCode::UnsortedInput);

  MergeOptions small;
  small.max_len = 3;
  const std::vector<Turn> longer = {{"A", 0, "a b"}, {"A", 1, "c d"}};
  for (const auto& u : merge_utterances(longer, small)) CHECK(u.words.size() <= 3);
}

TEST_CASE("stats") {
  std::vector<LabeledSequence> c(2);
  c[0].words = {"a", "b"};
  c[0].tags = {O, O};
  c[1].words = {"a", "b", "c", "d"};
  c[1].tags = {RM, RM, O, IM};
  const auto st = stats(c);
  CHECK(st.sentences == 2);
  CHECK(st.disfluent_sentences == 1);
  CHECK(st.disfluent_spans == 2);
  CHECK(st.words == 6);
  CHECK(stats({}) == CorpusStats{});

  std::vector<LabeledSequence> one(1);
  one[0].words = {"x"};
  one[0].tags = {RM};
  const auto s1 = stats(one);
  CHECK(s1.disfluent_spans == 1);
  CHECK(s1.disfluent_sentences == 1);
}

TEST_CASE("synthetic repetition is deterministic and consistent") {
  const std::vector<WordSequence> fluent = {{"i", "went", "home"}};
  SynthParams p;
  p.seed = 7;
  p.p_disfluent = 1.0;
  p.type_weights = {1, 0, 0, 0};
  p.p_extra_edit = 0.0;
  const auto a = generate_synthetic(fluent, p);
  const auto b = generate_synthetic(fluent, p);
  CHECK(a == b);
  REQUIRE(a.size() == 1);
  REQUIRE(a[0].spans.size() == 1);
  const auto& sp = a[0].spans[0];
  REQUIRE(sp.repair);
  CHECK(sp.reparandum.size() == sp.repair->size());
  for (std::size_t i = 0; i < sp.reparandum.size(); ++i) {
    CHECK(a[0].words[sp.reparandum.begin + i] == a[0].words[sp.repair->begin + i]);
  }
}

TEST_CASE("synthetic p_disfluent = 0 is identity") {
  const auto fluent = generate_fluent(50, 3);
  SynthParams p;
  p.p_disfluent = 0.0;
  const auto out = generate_synthetic(fluent, p);
  REQUIRE(out.size() == fluent.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].words == fluent[i]);
    CHECK_FALSE(out[i].disfluent());
  }
  CHECK(code_of([] { generate_synthetic({}, SynthParams{}); }) == ErrorCode::EmptyInputCorpus);
}

TEST_CASE("repetition windows always match over many seeds") {
  const auto fluent = generate_fluent(300, 11);
  SynthParams p;
  p.p_disfluent = 1.0;
  p.type_weights = {1, 0, 0, 0};
  p.seed = 5;
  for (const auto& s : generate_synthetic(fluent, p)) {
    validate(s);
    for (const auto& sp : s.spans) {
      if (!sp.repair || sp.repair->size() != sp.reparandum.size()) continue;
      for (std::size_t i = 0; i < sp.reparandum.size(); ++i) {
        CHECK(s.words[sp.reparandum.begin + i] == s.words[sp.repair->begin + i]);
      }
    }
  }
}

TEST_CASE("label scheme restriction matches IM to O mapping") {
  SynthParams p;
  p.seed = 9;
  p.p_disfluent = 0.8;
  for (const auto& s : generate_synthetic(generate_fluent(500, 2), p)) {
    const auto pre = preprocess(s);
    auto full = to_labels(pre, LabelScheme::ReparandumPlusInterregnum);
    const auto only = to_labels(pre, LabelScheme::ReparandumOnly);
    for (auto& t : full.tags) {
      if (t == IM) t = O;
    }
    CHECK(full.tags == only.tags);
  }
}

TEST_CASE("annotation file io reports line numbers") {
  std::istringstream in("# doc: d1\na b\n[ x + y ] z\n\n# doc: d2\n[ broken\n");
  try {
    read_annotations(in);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnbalancedMarkers);
    REQUIRE(e.line());
    CHECK(*e.line() == 6);
  }
}

TEST_CASE("label tsv round-trip") {
  std::vector<LabeledSequence> c(3);
  c[0] = {{"a", "b"}, {RM, O}, Origin::Gold, "d1"};
  c[1] = {{"c"}, {IM}, Origin::Gold, "d1"};
  c[2] = {{"e", "f"}, {O, O}, Origin::Gold, "d2"};
  std::ostringstream out;
  write_labels_tsv(out, c);
  std::istringstream in(out.str());
  CHECK(read_labels_tsv(in) == c);

  std::istringstream bad("a\tRM\nb\tXX\n");
  try {
    read_labels_tsv(bad);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedRecord);
    CHECK(e.line() == std::optional<std::size_t>(2));
  }
}

TEST_CASE("documents and sentences files round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "disfl_corpus_io";
  std::filesystem::create_directories(dir);
  const auto docs = generate_fluent_documents(4, 3, 1);
  write_documents(dir / "docs.txt", docs);
  CHECK(read_documents(dir / "docs.txt") == docs);
  const auto sents = generate_fluent(20, 4);
  write_sentences(dir / "s.txt", sents);
  CHECK(read_sentences(dir / "s.txt") == sents);
  std::filesystem::remove_all(dir);
}
