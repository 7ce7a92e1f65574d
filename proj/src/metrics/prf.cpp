// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/metrics/prf.hpp"

#include "disfl/error.hpp"
#include "json.hpp"

namespace disfl {

void EvalReport::finalize() {
  precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  no_positives = tp + fp + fn == 0;
}

std::string EvalReport::to_json() const {
  nlohmann::json j = {{"precision", precision}, {"recall", recall}, {"f1", f1},
                      {"tp", tp},               {"fp", fp},         {"fn", fn},
                      {"no_positives", no_positives}};
  if (size_mib >= 0.0) j["size_mib"] = size_mib;
  if (latency_ms >= 0.0) j["latency_ms"] = latency_ms;
  if (!config.empty()) j["config"] = config;
  return j.dump();
}

EvalReport report_from_json(const std::string& text) {
  EvalReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.tp = j.at("tp").get<std::size_t>();
    r.fp = j.at("fp").get<std::size_t>();
    r.fn = j.at("fn").get<std::size_t>();
    r.size_mib = j.value("size_mib", -1.0);
    r.latency_ms = j.value("latency_ms", -1.0);
    r.config = j.value("config", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("eval report: ") + e.what());
  }
  r.finalize();
  return r;
}

namespace {

void count(std::span<const Tag> pred, std::span<const Tag> gold, std::size_t index, EvalReport& r) {
  if (pred.size() != gold.size()) {
    throw Error(ErrorCode::AlignmentMismatch, "sentence " + std::to_string(index) + ": " +
                                                  std::to_string(pred.size()) + " predicted vs " +
                                                  std::to_string(gold.size()) + " gold words");
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != Tag::O, g = gold[i] != Tag::O;
    if (p && g) ++r.tp;
    else if (p) ++r.fp;
    else if (g) ++r.fn;
  }
}

void check_sizes(std::size_t pred, std::size_t gold) {
  if (pred != gold) {
    throw Error(ErrorCode::AlignmentMismatch,
                std::to_string(pred) + " predicted vs " + std::to_string(gold) + " gold sentences");
  }
}

}  // namespace

EvalReport token_prf(std::span<const LabeledSequence> pred, std::span<const LabeledSequence> gold) {
  check_sizes(pred.size(), gold.size());
  EvalReport r;
  for (std::size_t s = 0; s < pred.size(); ++s) count(pred[s].tags, gold[s].tags, s, r);
  r.finalize();
  return r;
}

EvalReport token_prf(std::span<const std::vector<Tag>> pred, std::span<const std::vector<Tag>> gold) {
  check_sizes(pred.size(), gold.size());
  EvalReport r;
  for (std::size_t s = 0; s < pred.size(); ++s) count(pred[s], gold[s], s, r);
  r.finalize();
  return r;
}

}  // namespace disfl
