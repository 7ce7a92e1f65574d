// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/model/tagger.hpp"

#include <algorithm>
#include <cmath>

#include "disfl/error.hpp"
#include "disfl/model/forward.hpp"
#include "disfl/tokenizer/encode.hpp"

namespace disfl {

std::vector<TaggedSentence> tag_sentences(const Model& model, const Vocab& vocab,
                                          std::span<const std::vector<std::string>> sentences,
                                          std::size_t batch_size) {
  if (!model.vocab_digest().empty() && model.vocab_digest() != vocab.digest()) {
    throw Error(ErrorCode::VocabMismatch,
                "model vocab digest " + model.vocab_digest() + " != vocabulary digest " + vocab.digest());
  }
  if (model.config().vocab != vocab.size()) {
    throw Error(ErrorCode::VocabMismatch, "model vocab size " + std::to_string(model.config().vocab) +
                                              " != vocabulary size " + std::to_string(vocab.size()));
  }
  batch_size = std::max<std::size_t>(batch_size, 1);
  const std::size_t C = model.config().num_tags;
  std::vector<TaggedSentence> out(sentences.size());
  std::vector<EncodedSequence> chunk;
  for (std::size_t start = 0; start < sentences.size(); start += batch_size) {
    const std::size_t end = std::min(sentences.size(), start + batch_size);
    chunk.clear();
    for (std::size_t i = start; i < end; ++i) {
      EncodedSequence e;
      e.encoding = encode_words(sentences[i], vocab, model.config().max_positions);
      e.num_words = sentences[i].size();
      chunk.push_back(std::move(e));
    }
    const Batch batch = make_batch(chunk);
    const Logits logits = forward(model, batch);
    for (std::size_t b = 0; b < chunk.size(); ++b) {
      TaggedSentence& ts = out[start + b];
      ts.tags.assign(chunk[b].num_words, Tag::O);
      ts.confidence.assign(chunk[b].num_words, 0.0f);
      std::vector<bool> seen(chunk[b].num_words, false);
      for (std::size_t t = 0; t < batch.length; ++t) {
        const std::int32_t w = batch.word_index[b * batch.length + t];
        if (w < 0 || seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = true;
        const auto row = logits.row(b * batch.length + t);
        const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        double z = 0.0;
        for (std::size_t c = 0; c < C; ++c) z += std::exp(static_cast<double>(row[c] - row[best]));
        ts.tags[static_cast<std::size_t>(w)] = static_cast<Tag>(std::min(best, kNumTags - 1));
        ts.confidence[static_cast<std::size_t>(w)] = static_cast<float>(1.0 / z);
      }
    }
  }
  return out;
}

std::vector<LabeledSequence> predict_labels(const Model& model, const Vocab& vocab,
                                            std::span<const LabeledSequence> corpus, std::size_t batch_size) {
  std::vector<std::vector<std::string>> words;
  words.reserve(corpus.size());
  for (const auto& s : corpus) words.push_back(s.words);
  const auto tagged = tag_sentences(model, vocab, words, batch_size);
  std::vector<LabeledSequence> out(corpus.begin(), corpus.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].tags = tagged[i].tags;
  return out;
}

}  // namespace disfl
