// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/metrics/size.hpp"

#include "disfl/error.hpp"
#include "disfl/model/checkpoint_io.hpp"

namespace disfl {

double bytes_to_mib(std::uint64_t bytes) { return static_cast<double>(bytes) / (1024.0 * 1024.0); }

double model_size_mib(const Checkpoint& ckpt) { return bytes_to_mib(serialize_checkpoint(ckpt).size()); }

double file_size_mib(const std::filesystem::path& path) {
  std::error_code ec;
  const auto bytes = std::filesystem::file_size(path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot stat " + path.string() + ": " + ec.message());
  return bytes_to_mib(bytes);
}

}  // namespace disfl
