// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "disfl/corpus/annotation.hpp"

namespace disfl {

/// {uh, huh, uh-huh, um}
const std::vector<std::string>& default_filled_pauses();

struct PreprocessOptions {
  bool remove_commas = true;
  std::vector<std::string> filled_pauses = default_filled_pauses();
};

/// ASCII lowercase.
std::string lowercase(std::string_view text);

/// Strips commas, deletes filled pauses (case-insensitive, after comma
/// stripping) and words left empty, and remaps span indices. An emptied
/// interregnum or repair becomes absent; a span whose reparandum empties is
/// dropped. Idempotent.
AnnotatedSentence preprocess(const AnnotatedSentence& sentence, const PreprocessOptions& options = {});

}  // namespace disfl
