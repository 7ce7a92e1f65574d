// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/corpus/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace disfl {

const std::vector<std::string>& default_filled_pauses() {
  static const std::vector<std::string> kPauses{"uh", "huh", "uh-huh", "um"};
  return kPauses;
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

AnnotatedSentence preprocess(const AnnotatedSentence& s, const PreprocessOptions& options) {
  std::unordered_set<std::string> pauses;
  for (const auto& p : options.filled_pauses) pauses.insert(lowercase(p));

  AnnotatedSentence out;
  out.doc_id = s.doc_id;
  out.speaker = s.speaker;
  out.timestamp = s.timestamp;

  // remap[i] = number of kept words before original index i
  std::vector<std::size_t> remap(s.words.size() + 1, 0);
  for (std::size_t i = 0; i < s.words.size(); ++i) {
    std::string w = s.words[i];
    if (options.remove_commas) w.erase(std::remove(w.begin(), w.end(), ','), w.end());
    const bool keep = !w.empty() && !pauses.contains(lowercase(w));
    remap[i] = out.words.size();
    if (keep) out.words.push_back(std::move(w));
  }
  remap[s.words.size()] = out.words.size();

  auto map_range = [&](const WordRange& r) { return WordRange{remap[r.begin], remap[r.end]}; };
  auto map_optional = [&](const std::optional<WordRange>& r) -> std::optional<WordRange> {
    if (!r) return std::nullopt;
    const WordRange m = map_range(*r);
    if (m.empty()) return std::nullopt;
    return m;
  };

  for (const auto& sp : s.spans) {
    DisfluencySpan m;
    m.reparandum = map_range(sp.reparandum);
    if (m.reparandum.empty()) continue;
    m.interregnum = map_optional(sp.interregnum);
    m.repair = map_optional(sp.repair);
    out.spans.push_back(m);
  }
  for (const auto& r : s.interregna) {
    const WordRange m = map_range(r);
    if (!m.empty()) out.interregna.push_back(m);
  }
  canonicalize(out);
  return out;
}

}  // namespace disfl
