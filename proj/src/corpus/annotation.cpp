// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/corpus/annotation.hpp"

#include <algorithm>
#include <cctype>

#include "disfl/error.hpp"

namespace disfl {

std::size_t DisfluencySpan::end() const noexcept {
  if (repair) return repair->end;
  if (interregnum) return interregnum->end;
  return reparandum.end;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

namespace {

struct OpenDisfluency {
  std::size_t begin = 0;
  std::optional<std::size_t> interruption;
  std::optional<WordRange> interregnum;
  bool flattened = false;
};

// Depth of `[ ]` nesting that is kept as distinct spans.
constexpr std::size_t kMaxKeptDepth = 2;

}  // namespace

void canonicalize(AnnotatedSentence& s) {
  std::stable_sort(s.spans.begin(), s.spans.end(), [](const DisfluencySpan& a, const DisfluencySpan& b) {
    if (a.begin() != b.begin()) return a.begin() < b.begin();
    return a.end() > b.end();
  });
  std::stable_sort(s.interregna.begin(), s.interregna.end(),
                   [](const WordRange& a, const WordRange& b) { return a.begin < b.begin; });
}

AnnotatedSentence parse_annotation(std::string_view text) {
  AnnotatedSentence out;
  std::vector<OpenDisfluency> stack;
  bool brace_open = false;
  std::size_t brace_begin = 0;
  bool brace_is_span_interregnum = false;
  bool after_plus = false;

  for (const std::string& tok : split_words(text)) {
    const bool follows_plus = after_plus;
    after_plus = false;
    const std::size_t pos = out.words.size();

    if (tok == "[") {
      if (brace_open) throw Error(ErrorCode::UnbalancedMarkers, "'[' inside '{ }'");
      OpenDisfluency d;
      d.begin = pos;
      d.flattened = stack.size() >= kMaxKeptDepth;
      stack.push_back(d);
    } else if (tok == "+") {
      if (brace_open) throw Error(ErrorCode::MisplacedInterruptionPoint, "'+' inside '{ }'");
      if (stack.empty()) throw Error(ErrorCode::MisplacedInterruptionPoint, "'+' outside '[ ]'");
      OpenDisfluency& top = stack.back();
      if (top.interruption) throw Error(ErrorCode::MisplacedInterruptionPoint, "second '+' in one disfluency");
      if (pos == top.begin) throw Error(ErrorCode::EmptyReparandum, "no words between '[' and '+'");
      top.interruption = pos;
      after_plus = true;
    } else if (tok == "{") {
      if (brace_open) throw Error(ErrorCode::UnbalancedMarkers, "nested '{'");
      brace_open = true;
      brace_begin = pos;
      brace_is_span_interregnum = follows_plus && !stack.back().flattened;
    } else if (tok == "}") {
      if (!brace_open) throw Error(ErrorCode::UnbalancedMarkers, "'}' without '{'");
      const WordRange range{brace_begin, pos};
      if (brace_is_span_interregnum) {
        if (!range.empty()) stack.back().interregnum = range;
      } else if (!range.empty()) {
        out.interregna.push_back(range);
      }
      brace_open = false;
    } else if (tok == "]") {
      if (brace_open) throw Error(ErrorCode::UnbalancedMarkers, "']' inside '{ }'");
      if (stack.empty()) throw Error(ErrorCode::UnbalancedMarkers, "']' without '['");
      const OpenDisfluency top = stack.back();
      stack.pop_back();
      if (!top.interruption) {
        throw Error(ErrorCode::MisplacedInterruptionPoint, "disfluency without '+'");
      }
      if (top.flattened) continue;
      DisfluencySpan span;
      span.reparandum = {top.begin, *top.interruption};
      span.interregnum = top.interregnum;
      const std::size_t repair_begin = top.interregnum ? top.interregnum->end : *top.interruption;
      if (pos > repair_begin) span.repair = WordRange{repair_begin, pos};
      out.spans.push_back(span);
    } else {
      out.words.push_back(tok);
    }
  }
  if (brace_open) throw Error(ErrorCode::UnbalancedMarkers, "missing '}'");
  if (!stack.empty()) throw Error(ErrorCode::UnbalancedMarkers, "missing ']'");
  canonicalize(out);
  return out;
}

namespace {

class Serializer {
 public:
  explicit Serializer(const AnnotatedSentence& s)
      : s_(s), span_used_(s.spans.size(), false), int_used_(s.interregna.size(), false) {}

  std::string run() {
    region(0, s_.words.size());
    std::string out;
    for (const auto& t : tokens_) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    return out;
  }

 private:
  void region(std::size_t a, std::size_t b) {
    std::size_t i = a;
    while (i < b) {
      std::optional<std::size_t> pick;
      for (std::size_t k = 0; k < s_.spans.size(); ++k) {
        const auto& sp = s_.spans[k];
        if (span_used_[k] || sp.begin() != i || sp.end() > b) continue;
        if (!pick || sp.end() > s_.spans[*pick].end()) pick = k;
      }
      if (pick) {
        span_used_[*pick] = true;
        emit_span(s_.spans[*pick]);
        i = s_.spans[*pick].end();
        continue;
      }
      bool emitted = false;
      for (std::size_t k = 0; k < s_.interregna.size(); ++k) {
        const auto& r = s_.interregna[k];
        if (int_used_[k] || r.begin != i || r.end > b || r.empty()) continue;
        int_used_[k] = true;
        braced(r);
        i = r.end;
        emitted = true;
        break;
      }
      if (emitted) continue;
      tokens_.push_back(s_.words[i]);
      ++i;
    }
  }

  void braced(const WordRange& r) {
    tokens_.emplace_back("{");
    for (std::size_t j = r.begin; j < r.end; ++j) tokens_.push_back(s_.words[j]);
    tokens_.emplace_back("}");
  }

  void emit_span(const DisfluencySpan& sp) {
    tokens_.emplace_back("[");
    region(sp.reparandum.begin, sp.reparandum.end);
    tokens_.emplace_back("+");
    if (sp.interregnum) braced(*sp.interregnum);
    if (sp.repair) region(sp.repair->begin, sp.repair->end);
    tokens_.emplace_back("]");
  }

  const AnnotatedSentence& s_;
  std::vector<bool> span_used_;
  std::vector<bool> int_used_;
  std::vector<std::string> tokens_;
};

void check_range(const WordRange& r, std::size_t n, const char* what) {
  if (r.begin > r.end || r.end > n) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " range out of bounds");
  }
}

bool laminar(const WordRange& a, const WordRange& b) {
  const bool disjoint = a.end <= b.begin || b.end <= a.begin;
  const bool a_in_b = a.begin >= b.begin && a.end <= b.end;
  const bool b_in_a = b.begin >= a.begin && b.end <= a.end;
  return disjoint || a_in_b || b_in_a;
}

}  // namespace

std::string serialize_annotation(const AnnotatedSentence& sentence) { return Serializer(sentence).run(); }

void validate(const AnnotatedSentence& s) {
  const std::size_t n = s.words.size();
  std::vector<WordRange> extents;
  for (const auto& sp : s.spans) {
    if (sp.reparandum.empty()) throw Error(ErrorCode::EmptyReparandum, "span with empty reparandum");
    check_range(sp.reparandum, n, "reparandum");
    std::size_t cursor = sp.reparandum.end;
    if (sp.interregnum) {
      check_range(*sp.interregnum, n, "interregnum");
      if (sp.interregnum->begin != cursor) throw Error(ErrorCode::InvalidArgument, "interregnum not at interruption point");
      cursor = sp.interregnum->end;
    }
    if (sp.repair) {
      check_range(*sp.repair, n, "repair");
      if (sp.repair->begin != cursor) throw Error(ErrorCode::InvalidArgument, "repair does not follow interregnum");
    }
    extents.push_back({sp.begin(), sp.end()});
  }
  for (std::size_t i = 0; i < extents.size(); ++i) {
    for (std::size_t j = i + 1; j < extents.size(); ++j) {
      if (!laminar(extents[i], extents[j])) throw Error(ErrorCode::InvalidArgument, "crossing disfluency spans");
    }
  }
  for (std::size_t i = 0; i < s.interregna.size(); ++i) {
    check_range(s.interregna[i], n, "interregnum");
    for (std::size_t j = i + 1; j < s.interregna.size(); ++j) {
      const auto& a = s.interregna[i];
      const auto& b = s.interregna[j];
      if (!(a.end <= b.begin || b.end <= a.begin)) throw Error(ErrorCode::InvalidArgument, "overlapping interregna");
    }
  }
}

}  // namespace disfl
