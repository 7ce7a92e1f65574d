// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "disfl/model/checkpoint.hpp"

namespace disfl {

/// File layout: "DFL1", u64 little-endian header length, JSON header, then
/// tensor payloads at 64-byte aligned offsets relative to the data base (the
/// first 64-byte boundary after the header).
inline constexpr std::uint32_t kCheckpointFormatVersion = 1;
inline constexpr std::size_t kPayloadAlignment = 64;

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
std::string serialize_checkpoint(const Checkpoint& ckpt);

/// Throws CorruptFile on bad magic, version, bounds or shapes, and
/// MissingTensor when a layout tensor is absent.
Checkpoint load_checkpoint(const std::filesystem::path& path);
Checkpoint deserialize_checkpoint(const std::string& bytes);

/// Exact file size save_checkpoint would produce for this config, computed
/// from the manifest alone. For Int8Quantized, every quantizable slot is
/// assumed to be int8 (as quantize_checkpoint produces).
std::uint64_t serialized_size(const ModelConfig& config, Precision precision, const std::string& vocab_digest = {});

}  // namespace disfl
