// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace disfl {

using TokenId = std::int32_t;

/// Immutable WordPiece vocabulary. Ids 0..4 are the special tokens; pieces
/// that continue a word carry the "##" prefix.
class Vocab {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kUnk = 1;
  static constexpr TokenId kCls = 2;
  static constexpr TokenId kSep = 3;
  static constexpr TokenId kMask = 4;
  static constexpr std::size_t kNumSpecials = 5;
  static constexpr std::string_view kContinuation = "##";

  static const std::vector<std::string>& special_tokens();

  Vocab() : Vocab(special_tokens()) {}
  explicit Vocab(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::optional<TokenId> find(std::string_view token) const;
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  bool is_special(TokenId id) const noexcept { return id >= 0 && static_cast<std::size_t>(id) < kNumSpecials; }

  /// Content digest of the token list (hex). Checkpoints record it so that a
  /// model is never paired with a different vocabulary.
  const std::string& digest() const noexcept { return digest_; }

  /// One token per line, line number = id.
  static Vocab load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  std::string digest_;
};

}  // namespace disfl
