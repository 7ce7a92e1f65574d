// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/error.hpp"

namespace disfl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnbalancedMarkers: return "UnbalancedMarkers";
    case ErrorCode::MisplacedInterruptionPoint: return "MisplacedInterruptionPoint";
    case ErrorCode::EmptyReparandum: return "EmptyReparandum";
    case ErrorCode::UnsortedInput: return "UnsortedInput";
    case ErrorCode::EmptyInputCorpus: return "EmptyInputCorpus";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::VocabTooSmall: return "VocabTooSmall";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IdOutOfRange: return "IdOutOfRange";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::MissingTensor: return "MissingTensor";
    case ErrorCode::AllPositionsIgnored: return "AllPositionsIgnored";
    case ErrorCode::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::VocabMismatch: return "VocabMismatch";
    case ErrorCode::EmptySilverWithPositivePct: return "EmptySilverWithPositivePct";
    case ErrorCode::ProvenanceViolation: return "ProvenanceViolation";
    case ErrorCode::AlignmentMismatch: return "AlignmentMismatch";
    case ErrorCode::NonFiniteValues: return "NonFiniteValues";
    case ErrorCode::AlreadyQuantized: return "AlreadyQuantized";
    case ErrorCode::NotQuantized: return "NotQuantized";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(message), code_(code), line_(line) {}

Error Error::with_line(std::size_t line) const {
  return Error(code_, "line " + std::to_string(line) + ": " + what(), line);
}

}  // namespace disfl
