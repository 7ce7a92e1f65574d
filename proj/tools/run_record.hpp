// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace disfl::cli {

/// JSON record written next to each command's output: the effective options
/// (replayable with --manifest), seed, and digests of every input and output.
class RunRecord {
 public:
  RunRecord(std::string command, std::string manifest);

  void seed(std::uint64_t s) { doc_["seed"] = s; }
  void input(const std::filesystem::path& p);
  void output(const std::filesystem::path& p);
  nlohmann::json& extra() { return doc_["results"]; }
  void write(const std::filesystem::path& path) const;

 private:
  nlohmann::json doc_;
};

}  // namespace disfl::cli
