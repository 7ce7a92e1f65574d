// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/tokenizer/vocab.hpp"

#include <fstream>

#include "disfl/digest.hpp"
#include "disfl/error.hpp"

namespace disfl {

const std::vector<std::string>& Vocab::special_tokens() {
  static const std::vector<std::string> kSpecials{"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
  return kSpecials;
}

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  const auto& specials = special_tokens();
  if (tokens_.size() < kNumSpecials) throw Error(ErrorCode::VocabTooSmall, "vocabulary needs the five special tokens");
  for (std::size_t i = 0; i < kNumSpecials; ++i) {
    if (tokens_[i] != specials[i]) {
      throw Error(ErrorCode::InvalidArgument, "id " + std::to_string(i) + " must be " + specials[i]);
    }
  }
  Fnv1a h;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw Error(ErrorCode::InvalidArgument, "empty token at id " + std::to_string(i));
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate token '" + tokens_[i] + "'");
    }
    h.update(tokens_[i]);
    h.update("\n");
  }
  digest_ = h.hex();
}

std::optional<TokenId> Vocab::find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return Vocab(std::move(tokens));
}

void Vocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& t : tokens_) out << t << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace disfl
