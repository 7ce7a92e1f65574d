// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace disfl {

// Incremental 64-bit FNV-1a. Used for content digests (vocab, checkpoint,
// input files in run records), not for anything security-sensitive.
class Fnv1a {
 public:
  void update(std::span<const std::byte> bytes);
  void update(std::string_view text);
  template <class T>
  void update_pod(const T& value) {
    update(std::as_bytes(std::span<const T>(&value, 1)));
  }
  std::uint64_t value() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string to_hex(std::uint64_t value);
std::string file_digest(const std::filesystem::path& path);

}  // namespace disfl
