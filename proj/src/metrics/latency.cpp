// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/metrics/latency.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>

#include "disfl/error.hpp"
#include "disfl/model/forward.hpp"
#include "json.hpp"

namespace disfl {

std::string LatencyReport::to_json() const {
  return nlohmann::json{{"median_ms", median_ms}, {"runs_ms", runs_ms}, {"batch", batch},
                        {"length", length},       {"host", host},       {"threads", threads}}
      .dump();
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of an empty list");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

namespace {

std::string host_name() {
  char buf[256] = {};
  if (gethostname(buf, sizeof(buf) - 1) != 0) return "unknown";
  return buf;
}

}  // namespace

LatencyReport bench_latency(const Model& model, const Batch& batch, const LatencyOptions& options) {
  if (options.repeats < 11) throw Error(ErrorCode::InvalidArgument, "latency needs at least 11 timed repeats");
  if (options.warmup < 3) throw Error(ErrorCode::InvalidArgument, "latency needs at least 3 warm-up runs");
  LatencyReport r;
  r.batch = batch.batch;
  r.length = batch.length;
  r.host = host_name();
  // The encoder runs single-threaded.
  r.threads = 1;
  for (std::size_t i = 0; i < options.warmup + options.repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const Logits logits = forward(model, batch);
    const auto stop = std::chrono::steady_clock::now();
    if (logits.values.empty() && batch.positions() > 0) throw Error(ErrorCode::ShapeMismatch, "empty logits");
    if (i >= options.warmup) r.runs_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  r.median_ms = median(r.runs_ms);
  return r;
}

LatencyReport bench_latency(const Model& model, const Vocab& vocab, std::span<const WordSequence> sentences,
                            const LatencyOptions& options) {
  std::vector<EncodedSequence> enc;
  for (const auto& s : sentences) {
    EncodedSequence e;
    e.encoding = encode_words(s, vocab, model.config().max_positions);
    enc.push_back(std::move(e));
  }
  return bench_latency(model, make_batch(enc), options);
}

}  // namespace disfl
