// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "disfl/corpus/labels.hpp"

namespace disfl {

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  // Neither gold nor prediction contains a positive word; P, R, F1 are 0.
  bool no_positives = false;
  // Negative when not measured.
  double size_mib = -1.0;
  double latency_ms = -1.0;
  std::string config;

  /// Recomputes precision, recall, f1 and no_positives from the counts.
  void finalize();
  std::string to_json() const;
};

/// Word-level counts with positive = tag != O. Throws AlignmentMismatch when
/// sentence counts or per-sentence word counts differ.
EvalReport token_prf(std::span<const LabeledSequence> pred, std::span<const LabeledSequence> gold);
EvalReport token_prf(std::span<const std::vector<Tag>> pred, std::span<const std::vector<Tag>> gold);

EvalReport report_from_json(const std::string& text);

}  // namespace disfl
