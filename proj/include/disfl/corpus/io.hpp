// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "disfl/corpus/annotation.hpp"
#include "disfl/corpus/labels.hpp"
#include "disfl/corpus/merge.hpp"
#include "disfl/corpus/synth.hpp"

namespace disfl {

// Annotation text: one bracket-notation sentence per line; `# doc: <id>`
// lines set the document id of the sentences that follow; blank lines are
// ignored. Parse errors are rethrown with the 1-based line number.
std::vector<AnnotatedSentence> read_annotations(std::istream& in);
std::vector<AnnotatedSentence> read_annotations(const std::filesystem::path& path);
void write_annotations(std::ostream& out, const std::vector<AnnotatedSentence>& sentences);
void write_annotations(const std::filesystem::path& path, const std::vector<AnnotatedSentence>& sentences);

// Token-label TSV: `word<TAB>tag` per line, blank line between sentences,
// `# doc: <id>` comment lines allowed.
std::vector<LabeledSequence> read_labels_tsv(std::istream& in, Origin origin = Origin::Gold);
std::vector<LabeledSequence> read_labels_tsv(const std::filesystem::path& path, Origin origin = Origin::Gold);
void write_labels_tsv(std::ostream& out, const std::vector<LabeledSequence>& corpus);
void write_labels_tsv(const std::filesystem::path& path, const std::vector<LabeledSequence>& corpus);

/// Turn transcript TSV: `conversation_id<TAB>speaker<TAB>start_seconds<TAB>text`.
/// Conversations are returned in order of first appearance.
std::vector<std::pair<std::string, std::vector<Turn>>> read_turns_tsv(const std::filesystem::path& path);

// Documents: one sentence per line, a blank line between documents.
std::vector<Document> read_documents(const std::filesystem::path& path);
void write_documents(const std::filesystem::path& path, const std::vector<Document>& docs);

/// Plain text, one sentence per line; blank lines skipped.
std::vector<WordSequence> read_sentences(const std::filesystem::path& path);
void write_sentences(const std::filesystem::path& path, const std::vector<WordSequence>& sentences);

std::string join_words(const WordSequence& words);

}  // namespace disfl
