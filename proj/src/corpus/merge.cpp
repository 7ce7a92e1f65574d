// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/corpus/merge.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include "disfl/corpus/annotation.hpp"
#include "disfl/error.hpp"

namespace disfl {

namespace {

struct OpenUtterance {
  MergedUtterance utt;
  double last_start = 0.0;
  std::size_t order = 0;
};

}  // namespace

std::vector<MergedUtterance> merge_utterances(std::span<const Turn> turns, const MergeOptions& options) {
  if (options.max_len == 0) throw Error(ErrorCode::InvalidArgument, "max_len must be >= 1");
  for (std::size_t i = 1; i < turns.size(); ++i) {
    if (turns[i].start < turns[i - 1].start) {
      throw Error(ErrorCode::UnsortedInput, "turn " + std::to_string(i) + " starts before its predecessor");
    }
  }

  // (order of creation, utterance); order breaks timestamp ties stably
  std::vector<std::pair<std::size_t, MergedUtterance>> done;
  std::map<std::string, OpenUtterance> open;
  std::size_t created = 0;

  auto close = [&](const std::string& speaker) {
    auto it = open.find(speaker);
    if (it == open.end()) return;
    if (!it->second.utt.words.empty()) done.emplace_back(it->second.order, std::move(it->second.utt));
    open.erase(it);
  };
  auto start_new = [&](const Turn& t) {
    OpenUtterance o;
    o.utt.speaker = t.speaker;
    o.utt.start = t.start;
    o.last_start = t.start;
    o.order = created++;
    open[t.speaker] = std::move(o);
  };

  for (const Turn& t : turns) {
    const std::vector<std::string> words = split_words(t.text);
    auto it = open.find(t.speaker);
    const bool joinable = it != open.end() && t.start - it->second.last_start <= options.max_gap &&
                          it->second.utt.words.size() + words.size() <= options.max_len;
    if (!joinable) {
      close(t.speaker);
      start_new(t);
    }
    for (const auto& w : words) {
      OpenUtterance& o = open[t.speaker];
      if (o.utt.words.size() == options.max_len) {
        close(t.speaker);
        start_new(t);
      }
      open[t.speaker].utt.words.push_back(w);
    }
    open[t.speaker].last_start = t.start;
  }
  std::vector<std::string> speakers;
  for (const auto& [speaker, _] : open) speakers.push_back(speaker);
  for (const auto& s : speakers) close(s);

  std::stable_sort(done.begin(), done.end(), [](const auto& a, const auto& b) {
    if (a.second.start != b.second.start) return a.second.start < b.second.start;
    return a.first < b.first;
  });
  std::vector<MergedUtterance> out;
  out.reserve(done.size());
  for (auto& [_, u] : done) out.push_back(std::move(u));
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    const auto first = current.find_first_not_of(" \t\r\n");
    if (first != std::string::npos) {
      const auto last = current.find_last_not_of(" \t\r\n");
      out.push_back(current.substr(first, last - first + 1));
    }
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    current += c;
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    if (j >= text.size() || !std::isspace(static_cast<unsigned char>(text[j]))) continue;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j < text.size() && std::isupper(static_cast<unsigned char>(text[j]))) flush();
  }
  flush();
  return out;
}

}  // namespace disfl
