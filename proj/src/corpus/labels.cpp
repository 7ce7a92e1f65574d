// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/corpus/labels.hpp"

#include <set>

#include "disfl/error.hpp"

namespace disfl {

std::string_view to_string(Tag tag) {
  switch (tag) {
    case Tag::O: return "O";
    case Tag::RM: return "RM";
    case Tag::IM: return "IM";
  }
  return "O";
}

std::optional<Tag> parse_tag(std::string_view text) {
  if (text == "O") return Tag::O;
  if (text == "RM") return Tag::RM;
  if (text == "IM") return Tag::IM;
  return std::nullopt;
}

std::string_view to_string(LabelScheme scheme) {
  return scheme == LabelScheme::ReparandumOnly ? "reparandum-only" : "reparandum-interregnum";
}

LabelScheme parse_scheme(std::string_view text) {
  if (text == "reparandum-only") return LabelScheme::ReparandumOnly;
  if (text == "reparandum-interregnum") return LabelScheme::ReparandumPlusInterregnum;
  throw Error(ErrorCode::InvalidArgument, "unknown label scheme '" + std::string(text) + "'");
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::Gold: return "gold";
    case Origin::Silver: return "silver";
    case Origin::Synthetic: return "synthetic";
  }
  return "gold";
}

LabeledSequence to_labels(const AnnotatedSentence& s, LabelScheme scheme, Origin origin) {
  LabeledSequence out;
  out.words = s.words;
  out.tags.assign(s.words.size(), Tag::O);
  out.origin = origin;
  out.doc_id = s.doc_id;
  const bool with_im = scheme == LabelScheme::ReparandumPlusInterregnum;
  auto mark_im = [&](const WordRange& r) {
    if (!with_im) return;
    for (std::size_t i = r.begin; i < r.end && i < out.tags.size(); ++i) {
      if (out.tags[i] == Tag::O) out.tags[i] = Tag::IM;
    }
  };
  for (const auto& sp : s.spans) {
    for (std::size_t i = sp.reparandum.begin; i < sp.reparandum.end && i < out.tags.size(); ++i) {
      out.tags[i] = Tag::RM;
    }
  }
  for (const auto& sp : s.spans) {
    if (sp.interregnum) mark_im(*sp.interregnum);
  }
  for (const auto& r : s.interregna) mark_im(r);
  return out;
}

LabeledSequence restrict_to_scheme(LabeledSequence seq, LabelScheme scheme) {
  if (scheme == LabelScheme::ReparandumOnly) {
    for (Tag& t : seq.tags) {
      if (t == Tag::IM) t = Tag::O;
    }
  }
  return seq;
}

std::size_t count_spans(std::span<const Tag> tags) {
  std::size_t runs = 0;
  bool inside = false;
  for (Tag t : tags) {
    const bool positive = t != Tag::O;
    if (positive && !inside) ++runs;
    inside = positive;
  }
  return runs;
}

CorpusStats stats(std::span<const LabeledSequence> corpus) {
  CorpusStats st;
  std::set<std::string> docs;
  for (const auto& seq : corpus) {
    ++st.sentences;
    docs.insert(seq.doc_id);
    st.words += seq.words.size();
    const std::size_t runs = count_spans(seq.tags);
    if (runs > 0) ++st.disfluent_sentences;
    st.disfluent_spans += runs;
  }
  st.docs = docs.size();
  return st;
}

}  // namespace disfl
