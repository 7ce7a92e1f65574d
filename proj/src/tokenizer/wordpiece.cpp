// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/tokenizer/wordpiece.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "disfl/corpus/preprocess.hpp"
#include "disfl/error.hpp"

namespace disfl {

std::string normalize_word(std::string_view word) { return lowercase(word); }

std::vector<std::string> utf8_chars(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (c >= 0xF0 && c < 0xF8) len = 4;
    else if (c >= 0xE0) len = c < 0xF0 ? 3 : 1;
    else if (c >= 0xC0) len = 2;
    if (i + len > text.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    }
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

namespace {

using PairKey = std::uint64_t;

PairKey pair_key(int a, int b) { return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b); }
int pair_first(PairKey k) { return static_cast<int>(k >> 32); }
int pair_second(PairKey k) { return static_cast<int>(k & 0xFFFFFFFFu); }

struct WordEntry {
  std::vector<int> symbols;
  std::int64_t count = 0;
};

class MergeTrainer {
 public:
  MergeTrainer(std::span<const std::vector<std::string>> corpus) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& sentence : corpus) {
      for (const auto& w : sentence) {
        const std::string norm = normalize_word(w);
        if (!norm.empty()) ++counts[norm];
      }
    }
    std::set<std::string> chars;
    std::vector<std::pair<std::vector<std::string>, std::int64_t>> split;
    for (const auto& [word, count] : counts) {
      auto cs = utf8_chars(word);
      if (cs.size() > kMaxWordChars) continue;
      chars.insert(cs.begin(), cs.end());
      split.emplace_back(std::move(cs), count);
    }
    for (const auto& c : chars) intern(c);
    for (const auto& c : chars) intern(std::string(Vocab::kContinuation) + c);
    alphabet_size_ = symbols_.size();

    for (const auto& [cs, count] : split) {
      WordEntry e;
      e.count = count;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        e.symbols.push_back(symbol_id(i == 0 ? cs[i] : std::string(Vocab::kContinuation) + cs[i]));
      }
      words_.push_back(std::move(e));
    }
    symbol_count_.assign(symbols_.size(), 0);
    for (std::size_t w = 0; w < words_.size(); ++w) add_word(w);
  }

  std::size_t alphabet_size() const { return alphabet_size_; }
  const std::vector<std::string>& symbols() const { return symbols_; }

  // Performs one merge; returns false when no pair qualifies.
  bool merge_best(std::size_t min_frequency, bool& created_new) {
    PairKey best = 0;
    bool found = false;
    double best_score = -1.0;
    std::int64_t best_count = 0;
    std::string best_str;
    for (const auto& [key, count] : pair_count_) {
      if (count <= 0 || static_cast<std::size_t>(count) < min_frequency) continue;
      const int a = pair_first(key);
      const int b = pair_second(key);
      const double score = static_cast<double>(count) /
                            (static_cast<double>(symbol_count_[static_cast<std::size_t>(a)]) *
                             static_cast<double>(symbol_count_[static_cast<std::size_t>(b)]));
      bool better = !found || score > best_score || (score == best_score && count > best_count);
      if (!better && found && score == best_score && count == best_count) {
        const std::string s = merged_string(a, b);
        better = s < best_str || (s == best_str && key < best);
      }
      if (better) {
        found = true;
        best = key;
        best_score = score;
        best_count = count;
        best_str = merged_string(a, b);
      }
    }
    if (!found) return false;
    const std::size_t before = symbols_.size();
    const int merged = intern(best_str);
    created_new = symbols_.size() > before;
    if (created_new) symbol_count_.push_back(0);
    apply(best, merged);
    return true;
  }

 private:
  int intern(const std::string& s) {
    auto [it, inserted] = symbol_index_.emplace(s, static_cast<int>(symbols_.size()));
    if (inserted) symbols_.push_back(s);
    return it->second;
  }
  int symbol_id(const std::string& s) const { return symbol_index_.at(s); }

  std::string merged_string(int a, int b) const {
    return symbols_[static_cast<std::size_t>(a)] + symbols_[static_cast<std::size_t>(b)].substr(Vocab::kContinuation.size());
  }

  void add_word(std::size_t w) { account(w, +1); }
  void remove_word(std::size_t w) { account(w, -1); }

  void account(std::size_t w, int sign) {
    const auto& e = words_[w];
    const std::int64_t c = sign * e.count;
    for (std::size_t i = 0; i < e.symbols.size(); ++i) {
      symbol_count_[static_cast<std::size_t>(e.symbols[i])] += c;
      if (i + 1 < e.symbols.size()) {
        const PairKey k = pair_key(e.symbols[i], e.symbols[i + 1]);
        auto& pc = pair_count_[k];
        pc += c;
        if (sign > 0) pair_words_[k].push_back(w);
        if (pc == 0) pair_count_.erase(k);
      }
    }
  }

  void apply(PairKey key, int merged) {
    const int a = pair_first(key);
    const int b = pair_second(key);
    auto node = pair_words_.extract(key);
    if (node.empty()) return;
    std::vector<std::size_t> targets = std::move(node.mapped());
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (std::size_t w : targets) {
      auto& syms = words_[w].symbols;
      bool has = false;
      for (std::size_t i = 0; i + 1 < syms.size() && !has; ++i) has = syms[i] == a && syms[i + 1] == b;
      if (!has) continue;
      remove_word(w);
      std::vector<int> next;
      next.reserve(syms.size());
      for (std::size_t i = 0; i < syms.size();) {
        if (i + 1 < syms.size() && syms[i] == a && syms[i + 1] == b) {
          next.push_back(merged);
          i += 2;
        } else {
          next.push_back(syms[i]);
          ++i;
        }
      }
      syms = std::move(next);
      add_word(w);
    }
  }

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> symbol_index_;
  std::size_t alphabet_size_ = 0;
  std::vector<WordEntry> words_;
  std::vector<std::int64_t> symbol_count_;
  std::unordered_map<PairKey, std::int64_t> pair_count_;
  std::unordered_map<PairKey, std::vector<std::size_t>> pair_words_;
};

}  // namespace

Vocab train_wordpiece(std::span<const std::vector<std::string>> corpus, std::size_t vocab_size,
                      std::size_t min_frequency) {
  MergeTrainer trainer(corpus);
  const std::size_t base = Vocab::kNumSpecials + trainer.alphabet_size();
  if (vocab_size < base) {
    throw Error(ErrorCode::VocabTooSmall, "vocab_size " + std::to_string(vocab_size) + " < " + std::to_string(base) +
                                              " (specials plus alphabet)");
  }
  std::size_t size = base;
  while (size < vocab_size) {
    bool created = false;
    if (!trainer.merge_best(std::max<std::size_t>(min_frequency, 1), created)) break;
    if (created) ++size;
  }
  std::vector<std::string> tokens = Vocab::special_tokens();
  tokens.insert(tokens.end(), trainer.symbols().begin(), trainer.symbols().end());
  return Vocab(std::move(tokens));
}

std::vector<TokenId> tokenize(std::string_view word, const Vocab& vocab) {
  const std::string norm = normalize_word(word);
  const auto chars = utf8_chars(norm);
  if (chars.empty() || chars.size() > kMaxWordChars) return {Vocab::kUnk};
  std::vector<TokenId> out;
  std::size_t start = 0;
  while (start < chars.size()) {
    std::optional<TokenId> hit;
    std::size_t end = chars.size();
    for (; end > start; --end) {
      std::string piece = start > 0 ? std::string(Vocab::kContinuation) : std::string();
      for (std::size_t i = start; i < end; ++i) piece += chars[i];
      hit = vocab.find(piece);
      if (hit) break;
    }
    if (!hit) return {Vocab::kUnk};
    out.push_back(*hit);
    start = end;
  }
  return out;
}

std::string detokenize(std::span<const TokenId> ids, const Vocab& vocab) {
  std::string out;
  for (TokenId id : ids) {
    const std::string& t = vocab.token(id);
    if (t.rfind(Vocab::kContinuation, 0) == 0 && !out.empty()) {
      out += t.substr(Vocab::kContinuation.size());
    } else {
      out += t;
    }
  }
  return out;
}

}  // namespace disfl
