// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>

#include "disfl/model/checkpoint.hpp"

namespace disfl {

/// 1 MiB = 1024^2 bytes.
double bytes_to_mib(std::uint64_t bytes);

/// Size of the serialized checkpoint (header plus payloads).
double model_size_mib(const Checkpoint& ckpt);
double file_size_mib(const std::filesystem::path& path);

}  // namespace disfl
