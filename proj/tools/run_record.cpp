// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "run_record.hpp"

#include <fstream>

#include "disfl/digest.hpp"
#include "disfl/error.hpp"

namespace disfl::cli {

RunRecord::RunRecord(std::string command, std::string manifest) {
  doc_["command"] = std::move(command);
  doc_["version"] = DISFL_VERSION;
  doc_["manifest"] = std::move(manifest);
  doc_["inputs"] = nlohmann::json::object();
  doc_["outputs"] = nlohmann::json::object();
  doc_["results"] = nlohmann::json::object();
}

void RunRecord::input(const std::filesystem::path& p) { doc_["inputs"][p.string()] = file_digest(p); }

void RunRecord::output(const std::filesystem::path& p) { doc_["outputs"][p.string()] = file_digest(p); }

void RunRecord::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  out << doc_.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::IoError, "cannot write run record " + path.string());
}

}  // namespace disfl::cli
