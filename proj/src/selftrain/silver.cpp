// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/selftrain/silver.hpp"

#include <fstream>
#include <iterator>

#include "disfl/corpus/io.hpp"
#include "disfl/error.hpp"
#include "disfl/model/tagger.hpp"
#include "json.hpp"

namespace disfl {

void SilverCorpus::validate() const {
  if (teacher_id.empty()) throw Error(ErrorCode::InvalidArgument, "silver corpus has no teacher id");
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    if (sequences[i].origin != Origin::Silver) {
      throw Error(ErrorCode::ProvenanceViolation, "silver corpus sequence " + std::to_string(i) + " is not silver");
    }
  }
}

SilverCorpus label_silver(const Model& teacher, const std::string& teacher_id, const Vocab& vocab,
                          std::span<const WordSequence> unlabeled) {
  SilverCorpus out;
  out.teacher_id = teacher_id;
  const auto tagged = tag_sentences(teacher, vocab, unlabeled, 64);
  double conf = 0.0;
  std::size_t words = 0;
  out.sequences.reserve(unlabeled.size());
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    LabeledSequence s;
    s.words = unlabeled[i];
    s.tags = tagged[i].tags;
    s.origin = Origin::Silver;
    for (float c : tagged[i].confidence) conf += c;
    words += tagged[i].confidence.size();
    out.sequences.push_back(std::move(s));
  }
  out.mean_confidence = words > 0 ? conf / static_cast<double>(words) : 0.0;
  return out;
}

SilverCorpus label_silver(const Checkpoint& teacher, const Vocab& vocab, std::span<const WordSequence> unlabeled) {
  return label_silver(Model(teacher), checkpoint_digest(teacher), vocab, unlabeled);
}

std::filesystem::path silver_meta_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".meta.json");
}

void save_silver(const SilverCorpus& silver, const std::filesystem::path& path) {
  silver.validate();
  write_labels_tsv(path, silver.sequences);
  nlohmann::json params;
  try {
    params = nlohmann::json::parse(silver.parameters.empty() ? "{}" : silver.parameters);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("silver parameters: ") + e.what());
  }
  const nlohmann::json meta = {{"teacher_id", silver.teacher_id},
                               {"mean_confidence", silver.mean_confidence},
                               {"sentences", silver.sequences.size()},
                               {"parameters", params}};
  const auto meta_path = silver_meta_path(path);
  std::ofstream out(meta_path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + meta_path.string());
  out << meta.dump(2) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + meta_path.string());
}

SilverCorpus load_silver(const std::filesystem::path& path) {
  SilverCorpus out;
  out.sequences = read_labels_tsv(path, Origin::Silver);
  const auto meta_path = silver_meta_path(path);
  std::ifstream in(meta_path);
  if (!in) throw Error(ErrorCode::IoError, "missing silver metadata " + meta_path.string());
  try {
    const auto meta = nlohmann::json::parse(std::string((std::istreambuf_iterator<char>(in)), {}));
    out.teacher_id = meta.at("teacher_id").get<std::string>();
    out.mean_confidence = meta.value("mean_confidence", 0.0);
    out.parameters = meta.value("parameters", nlohmann::json::object()).dump();
    if (meta.value("sentences", out.sequences.size()) != out.sequences.size()) {
      throw Error(ErrorCode::MalformedRecord, "silver metadata sentence count does not match " + path.string());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("silver metadata: ") + e.what());
  }
  out.validate();
  return out;
}

double label_agreement(const SilverCorpus& a, const SilverCorpus& b) {
  if (a.sequences.size() != b.sequences.size()) {
    throw Error(ErrorCode::AlignmentMismatch, "silver corpora differ in sentence count");
  }
  std::size_t same = 0, total = 0;
  for (std::size_t i = 0; i < a.sequences.size(); ++i) {
    const auto& x = a.sequences[i].tags;
    const auto& y = b.sequences[i].tags;
    if (x.size() != y.size()) throw Error(ErrorCode::AlignmentMismatch, "silver sentence " + std::to_string(i));
    for (std::size_t j = 0; j < x.size(); ++j) same += x[j] == y[j] ? 1 : 0;
    total += x.size();
  }
  return total > 0 ? static_cast<double>(same) / static_cast<double>(total) : 1.0;
}

}  // namespace disfl
