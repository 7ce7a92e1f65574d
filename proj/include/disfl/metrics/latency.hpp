// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "disfl/corpus/synth.hpp"
#include "disfl/model/checkpoint.hpp"
#include "disfl/tokenizer/encode.hpp"
#include "disfl/tokenizer/vocab.hpp"

namespace disfl {

struct LatencyOptions {
  // Timed runs after warm-up; at least 11.
  std::size_t repeats = 11;
  // Discarded runs; at least 3.
  std::size_t warmup = 3;
};

struct LatencyReport {
  double median_ms = 0.0;
  std::vector<double> runs_ms;
  std::size_t batch = 0;
  std::size_t length = 0;
  std::string host;
  std::size_t threads = 1;

  std::string to_json() const;
};

/// Middle order statistic for odd sizes, mean of the two middle ones for even.
double median(std::vector<double> values);

/// Wall-clock of forward() on one fixed batch. Throws InvalidArgument when
/// repeats < 11 or warmup < 3.
LatencyReport bench_latency(const Model& model, const Batch& batch, const LatencyOptions& options = {});
LatencyReport bench_latency(const Model& model, const Vocab& vocab, std::span<const WordSequence> sentences,
                            const LatencyOptions& options = {});

}  // namespace disfl
