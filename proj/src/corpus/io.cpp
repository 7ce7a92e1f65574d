// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/corpus/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "disfl/error.hpp"

namespace disfl {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool doc_comment(const std::string& line, std::string& id) {
  constexpr std::string_view kPrefix = "# doc:";
  if (line.rfind(kPrefix, 0) != 0) return false;
  const auto first = line.find_first_not_of(' ', kPrefix.size());
  id = first == std::string::npos ? "" : line.substr(first);
  return true;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

std::string join_words(const WordSequence& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::vector<AnnotatedSentence> read_annotations(std::istream& in) {
  std::vector<AnnotatedSentence> out;
  std::string line;
  std::string doc;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (doc_comment(line, doc)) continue;
    if (blank(line)) continue;
    try {
      AnnotatedSentence s = parse_annotation(line);
      s.doc_id = doc;
      out.push_back(std::move(s));
    } catch (const Error& e) {
      throw e.with_line(lineno);
    }
  }
  return out;
}

std::vector<AnnotatedSentence> read_annotations(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_annotations(in);
}

void write_annotations(std::ostream& out, const std::vector<AnnotatedSentence>& sentences) {
  std::optional<std::string> doc;
  for (const auto& s : sentences) {
    if (!doc || *doc != s.doc_id) {
      if (!s.doc_id.empty() || doc) out << "# doc: " << s.doc_id << '\n';
      doc = s.doc_id;
    }
    out << serialize_annotation(s) << '\n';
  }
}

void write_annotations(const std::filesystem::path& path, const std::vector<AnnotatedSentence>& sentences) {
  auto out = open_out(path);
  write_annotations(out, sentences);
  finish(out, path);
}

std::vector<LabeledSequence> read_labels_tsv(std::istream& in, Origin origin) {
  std::vector<LabeledSequence> out;
  LabeledSequence cur;
  cur.origin = origin;
  std::string doc;
  std::string line;
  std::size_t lineno = 0;
  auto flush = [&] {
    if (!cur.words.empty()) {
      cur.doc_id = doc;
      out.push_back(std::move(cur));
    }
    cur = LabeledSequence{};
    cur.origin = origin;
  };
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (doc_comment(line, doc)) {
      flush();
      continue;
    }
    if (blank(line)) {
      flush();
      continue;
    }
    const auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty()) {
      throw Error(ErrorCode::MalformedRecord, "expected word<TAB>tag").with_line(lineno);
    }
    const auto tag = parse_tag(cols[1]);
    if (!tag) throw Error(ErrorCode::MalformedRecord, "unknown tag '" + cols[1] + "'").with_line(lineno);
    cur.words.push_back(cols[0]);
    cur.tags.push_back(*tag);
  }
  flush();
  return out;
}

std::vector<LabeledSequence> read_labels_tsv(const std::filesystem::path& path, Origin origin) {
  auto in = open_in(path);
  return read_labels_tsv(in, origin);
}

void write_labels_tsv(std::ostream& out, const std::vector<LabeledSequence>& corpus) {
  std::optional<std::string> doc;
  bool after_sentence = false;
  for (const auto& seq : corpus) {
    if (!doc || *doc != seq.doc_id) {
      if (!seq.doc_id.empty() || doc) {
        if (after_sentence) out << '\n';
        out << "# doc: " << seq.doc_id << '\n';
        after_sentence = false;
      }
      doc = seq.doc_id;
    }
    if (after_sentence) out << '\n';
    for (std::size_t i = 0; i < seq.words.size(); ++i) out << seq.words[i] << '\t' << to_string(seq.tags[i]) << '\n';
    after_sentence = true;
  }
}

void write_labels_tsv(const std::filesystem::path& path, const std::vector<LabeledSequence>& corpus) {
  auto out = open_out(path);
  write_labels_tsv(out, corpus);
  finish(out, path);
}

std::vector<std::pair<std::string, std::vector<Turn>>> read_turns_tsv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::pair<std::string, std::vector<Turn>>> out;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (blank(line) || line[0] == '#') continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 4) throw Error(ErrorCode::MalformedRecord, "expected 4 tab-separated columns").with_line(lineno);
    Turn t;
    t.speaker = cols[1];
    t.text = cols[3];
    try {
      std::size_t used = 0;
      t.start = std::stod(cols[2], &used);
      if (used != cols[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedRecord, "bad start time '" + cols[2] + "'").with_line(lineno);
    }
    auto [it, inserted] = index.emplace(cols[0], out.size());
    if (inserted) out.emplace_back(cols[0], std::vector<Turn>{});
    out[it->second].second.push_back(std::move(t));
  }
  return out;
}

std::vector<Document> read_documents(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Document> docs;
  Document cur;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (blank(line)) {
      if (!cur.empty()) docs.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    cur.push_back(split_words(line));
  }
  if (!cur.empty()) docs.push_back(std::move(cur));
  return docs;
}

void write_documents(const std::filesystem::path& path, const std::vector<Document>& docs) {
  auto out = open_out(path);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (d > 0) out << '\n';
    for (const auto& s : docs[d]) out << join_words(s) << '\n';
  }
  finish(out, path);
}

std::vector<WordSequence> read_sentences(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<WordSequence> out;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (blank(line)) continue;
    out.push_back(split_words(line));
  }
  return out;
}

void write_sentences(const std::filesystem::path& path, const std::vector<WordSequence>& sentences) {
  auto out = open_out(path);
  for (const auto& s : sentences) out << join_words(s) << '\n';
  finish(out, path);
}

}  // namespace disfl
