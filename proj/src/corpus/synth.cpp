// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/corpus/synth.hpp"

#include <cmath>
#include <numeric>
#include <optional>

#include "disfl/error.hpp"
#include "disfl/rng.hpp"

namespace disfl {

void SynthParams::validate() const {
  if (!(p_disfluent >= 0.0 && p_disfluent <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p_disfluent must be in [0,1]");
  if (!(p_extra_edit >= 0.0 && p_extra_edit <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p_extra_edit must be in [0,1]");
  double total = 0.0;
  for (double w : type_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidArgument, "type weights must be non-negative");
    total += w;
  }
  if (total <= 0.0) throw Error(ErrorCode::InvalidArgument, "type weights are all zero");
  if (max_reparandum_len == 0) throw Error(ErrorCode::InvalidArgument, "max_reparandum_len must be >= 1");
}

const std::vector<std::string>& interregnum_phrases() {
  static const std::vector<std::string> kPhrases{"you know", "i mean", "well"};
  return kPhrases;
}

namespace {

const std::vector<std::string> kSynthPauses{"uh", "um"};

class Editor {
 public:
  Editor(AnnotatedSentence& s, Rng& rng) : s_(s), rng_(rng) {}

  bool repetition(std::size_t max_len) {
    const auto free = free_words();
    // longest free run bounds the window length
    std::size_t longest = 0;
    for (std::size_t i = 0, run = 0; i < free.size(); ++i) {
      run = free[i] ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    if (longest == 0) return false;
    const std::size_t k = rng_.between(1, std::min(max_len, longest));
    std::vector<std::size_t> starts;
    for (std::size_t st = 0; st + k <= free.size(); ++st) {
      bool ok = true;
      for (std::size_t j = st; j < st + k && ok; ++j) ok = free[j];
      if (ok) starts.push_back(st);
    }
    const std::size_t st = starts[rng_.index(starts.size())];
    const std::vector<std::string> copy(s_.words.begin() + static_cast<std::ptrdiff_t>(st),
                                        s_.words.begin() + static_cast<std::ptrdiff_t>(st + k));
    insert(st + k, copy);
    DisfluencySpan sp;
    sp.reparandum = {st, st + k};
    sp.repair = WordRange{st + k, st + 2 * k};
    s_.spans.push_back(sp);
    return true;
  }

  bool restart(std::span<const WordSequence> corpus, std::size_t self, std::size_t max_len) {
    std::size_t other = self;
    if (corpus.size() > 1) {
      other = rng_.index(corpus.size() - 1);
      if (other >= self) ++other;
    }
    const WordSequence& src = corpus[other];
    if (src.empty()) return false;
    // a truncated prefix: shorter than the source sentence when possible
    const std::size_t cap = src.size() > 1 ? std::min(max_len, src.size() - 1) : 1;
    const std::size_t k = rng_.between(1, cap);
    insert(0, std::vector<std::string>(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(k)));
    DisfluencySpan sp;
    sp.reparandum = {0, k};
    s_.spans.push_back(sp);
    return true;
  }

  // Places `phrase` as the interregnum of an existing span (when one without
  // an interregnum exists and a coin flip says so) or standalone at a free
  // word boundary.
  bool interregnum(const std::vector<std::string>& phrase) {
    std::vector<std::size_t> open_spans;
    for (std::size_t i = 0; i < s_.spans.size(); ++i) {
      if (!s_.spans[i].interregnum) open_spans.push_back(i);
    }
    if (!open_spans.empty() && rng_.bernoulli(0.5)) {
      const std::size_t idx = open_spans[rng_.index(open_spans.size())];
      const std::size_t ip = s_.spans[idx].reparandum.end;
      insert(ip, phrase);
      s_.spans[idx].interregnum = WordRange{ip, ip + phrase.size()};
      return true;
    }
    const auto bounds = free_boundaries();
    const std::size_t q = bounds[rng_.index(bounds.size())];
    insert(q, phrase);
    s_.interregna.push_back({q, q + phrase.size()});
    return true;
  }

 private:
  std::vector<bool> free_words() const {
    std::vector<bool> free(s_.words.size(), true);
    auto occupy = [&](const WordRange& r) {
      for (std::size_t i = r.begin; i < r.end; ++i) free[i] = false;
    };
    for (const auto& sp : s_.spans) occupy({sp.begin(), sp.end()});
    for (const auto& r : s_.interregna) occupy(r);
    return free;
  }

  std::vector<std::size_t> free_boundaries() const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q <= s_.words.size(); ++q) {
      bool inside = false;
      for (const auto& sp : s_.spans) inside = inside || (sp.begin() < q && q < sp.end());
      for (const auto& r : s_.interregna) inside = inside || (r.begin < q && q < r.end);
      if (!inside) out.push_back(q);
    }
    return out;
  }

  // Inserts words before index q; q must not split any range.
  void insert(std::size_t q, const std::vector<std::string>& words) {
    s_.words.insert(s_.words.begin() + static_cast<std::ptrdiff_t>(q), words.begin(), words.end());
    const std::size_t k = words.size();
    auto shift = [&](WordRange& r) {
      if (r.begin >= q) {
        r.begin += k;
        r.end += k;
      }
    };
    for (auto& sp : s_.spans) {
      shift(sp.reparandum);
      if (sp.interregnum) shift(*sp.interregnum);
      if (sp.repair) shift(*sp.repair);
    }
    for (auto& r : s_.interregna) shift(r);
  }

  AnnotatedSentence& s_;
  Rng& rng_;
};

DisfluencyType sample_type(const SynthParams& p, Rng& rng) {
  const double total = std::accumulate(p.type_weights.begin(), p.type_weights.end(), 0.0);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < kNumDisfluencyTypes; ++i) {
    if (u < p.type_weights[i]) return static_cast<DisfluencyType>(i);
    u -= p.type_weights[i];
  }
  for (std::size_t i = kNumDisfluencyTypes; i-- > 0;) {
    if (p.type_weights[i] > 0) return static_cast<DisfluencyType>(i);
  }
  return DisfluencyType::Repetition;
}

AnnotatedSentence synthesize_one(std::span<const WordSequence> corpus, std::size_t index, const SynthParams& p) {
  Rng rng(Rng::derive(p.seed, index));
  AnnotatedSentence s;
  s.words = corpus[index];
  if (!rng.bernoulli(p.p_disfluent)) return s;

  std::size_t edits = 1;
  while (edits < SynthParams::kMaxEdits && rng.bernoulli(p.p_extra_edit)) ++edits;

  Editor ed(s, rng);
  for (std::size_t e = 0; e < edits; ++e) {
    // a failed edit (e.g. no free window left) is retried with a fresh type
    for (int attempt = 0; attempt < 4; ++attempt) {
      bool ok = false;
      switch (sample_type(p, rng)) {
        case DisfluencyType::Repetition: ok = ed.repetition(p.max_reparandum_len); break;
        case DisfluencyType::Restart: ok = ed.restart(corpus, index, p.max_reparandum_len); break;
        case DisfluencyType::InterregnumInsert: {
          const auto& phrases = interregnum_phrases();
          ok = ed.interregnum(split_words(phrases[rng.index(phrases.size())]));
          break;
        }
        case DisfluencyType::FilledPauseInsert:
          ok = ed.interregnum({kSynthPauses[rng.index(kSynthPauses.size())]});
          break;
      }
      if (ok) break;
    }
  }
  canonicalize(s);
  return s;
}

}  // namespace

std::vector<AnnotatedSentence> generate_synthetic(std::span<const WordSequence> fluent, const SynthParams& params) {
  params.validate();
  if (fluent.empty()) throw Error(ErrorCode::EmptyInputCorpus, "no fluent sentences to augment");
  std::vector<AnnotatedSentence> out;
  out.reserve(fluent.size());
  for (std::size_t i = 0; i < fluent.size(); ++i) out.push_back(synthesize_one(fluent, i, params));
  return out;
}

}  // namespace disfl
