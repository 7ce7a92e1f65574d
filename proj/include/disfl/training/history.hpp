// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace disfl {

/// One line of a training history file.
struct HistoryRecord {
  std::size_t step = 0;
  // "train", "dev", "mlm", "nsp", ...
  std::string split;
  double loss = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double epoch = 0.0;
  double lr = 0.0;
  // Negative when the run did not mix silver data.
  double silver_pct = -1.0;

  friend bool operator==(const HistoryRecord&, const HistoryRecord&) = default;
};

using History = std::vector<HistoryRecord>;

std::string to_json_line(const HistoryRecord& r);
HistoryRecord history_record_from_json(const std::string& line);

void write_history(const std::filesystem::path& path, const History& history);
History read_history(const std::filesystem::path& path);

}  // namespace disfl
