// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace disfl {

enum class ErrorCode {
  InvalidArgument,
  IoError,
  // corpus
  UnbalancedMarkers,
  MisplacedInterruptionPoint,
  EmptyReparandum,
  UnsortedInput,
  EmptyInputCorpus,
  MalformedRecord,
  // tokenizer
  VocabTooSmall,
  // model
  ShapeMismatch,
  IdOutOfRange,
  CorruptFile,
  MissingTensor,
  // training
  AllPositionsIgnored,
  NonFiniteGradient,
  // selftrain
  VocabMismatch,
  EmptySilverWithPositivePct,
  ProvenanceViolation,
  // metrics
  AlignmentMismatch,
  // quantize
  NonFiniteValues,
  AlreadyQuantized,
  NotQuantized,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. `line` is set for errors that
/// originate from a specific line of a text input file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

  Error with_line(std::size_t line) const;

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace disfl
