// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/training/history.hpp"

#include <fstream>

#include "disfl/error.hpp"
#include "json.hpp"

namespace disfl {

std::string to_json_line(const HistoryRecord& r) {
  nlohmann::json j = {{"step", r.step}, {"split", r.split}, {"loss", r.loss},   {"precision", r.precision},
                      {"recall", r.recall}, {"f1", r.f1},   {"epoch", r.epoch}, {"lr", r.lr}};
  if (r.silver_pct >= 0.0) j["silver_pct"] = r.silver_pct;
  return j.dump();
}

HistoryRecord history_record_from_json(const std::string& line) {
  HistoryRecord r;
  try {
    const auto j = nlohmann::json::parse(line);
    r.step = j.at("step").get<std::size_t>();
    r.split = j.at("split").get<std::string>();
    r.loss = j.value("loss", 0.0);
    r.precision = j.value("precision", 0.0);
    r.recall = j.value("recall", 0.0);
    r.f1 = j.value("f1", 0.0);
    r.epoch = j.value("epoch", 0.0);
    r.lr = j.value("lr", 0.0);
    r.silver_pct = j.value("silver_pct", -1.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("history record: ") + e.what());
  }
  return r;
}

void write_history(const std::filesystem::path& path, const History& history) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& r : history) out << to_json_line(r) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

History read_history(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  History h;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      h.push_back(history_record_from_json(line));
    } catch (const Error& e) {
      throw e.with_line(lineno);
    }
  }
  return h;
}

}  // namespace disfl
