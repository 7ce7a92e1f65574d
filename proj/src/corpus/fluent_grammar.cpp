// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <string>
#include <vector>

#include "disfl/corpus/annotation.hpp"
#include "disfl/corpus/synth.hpp"
#include "disfl/rng.hpp"

namespace disfl {

namespace {

struct Topic {
  std::vector<std::string> nouns;
  std::vector<std::string> places;
  std::vector<std::string> verbs_past;
  std::vector<std::string> verbs_base;
  std::vector<std::string> adjectives;
};

// Filler phrases ("you know", "i mean", "well") and filled pauses never occur
// here, so in synthetic data they only appear as inserted interregna.
const std::vector<Topic>& topics() {
  static const std::vector<Topic> kTopics{
      {{"pizza", "soup", "sandwich", "salad", "dinner", "lunch", "coffee", "bread", "cake", "pasta"},
       {"kitchen", "restaurant", "market", "cafe", "bakery"},
       {"cooked", "ate", "bought", "made", "ordered", "tried"},
       {"cook", "eat", "buy", "make", "order", "try"},
       {"good", "spicy", "fresh", "cheap", "sweet"}},
      {{"ticket", "train", "flight", "car", "map", "hotel", "bus", "bag"},
       {"airport", "station", "city", "beach", "island", "mountains"},
       {"booked", "missed", "rented", "took", "found", "packed"},
       {"book", "miss", "rent", "take", "find", "pack"},
       {"late", "crowded", "expensive", "long", "quiet"}},
      {{"report", "meeting", "project", "email", "deadline", "computer", "schedule", "budget"},
       {"office", "building", "conference", "lab"},
       {"finished", "sent", "wrote", "started", "planned", "fixed"},
       {"finish", "send", "write", "start", "plan", "fix"},
       {"busy", "hard", "important", "boring", "new"}},
      {{"kids", "dog", "parents", "brother", "sister", "house", "garden", "birthday"},
       {"park", "school", "yard", "church"},
       {"visited", "called", "helped", "watched", "met", "fed"},
       {"visit", "call", "help", "watch", "meet", "feed"},
       {"happy", "tired", "old", "little", "nice"}},
      {{"game", "team", "ball", "match", "season", "coach", "bike", "race"},
       {"stadium", "gym", "field", "court"},
       {"played", "won", "lost", "joined", "followed", "coached"},
       {"play", "win", "lose", "join", "follow", "coach"},
       {"close", "exciting", "fast", "tough", "great"}},
      {{"rain", "snow", "storm", "wind", "umbrella", "jacket", "forecast", "heat"},
       {"porch", "lake", "valley", "coast"},
       {"checked", "expected", "needed", "hated", "loved", "shoveled"},
       {"check", "expect", "need", "hate", "love", "shovel"},
       {"cold", "warm", "wet", "windy", "sunny"}},
  };
  return kTopics;
}

const std::vector<std::string> kSubjects{"i", "we", "they", "you", "he", "she", "my friend", "my wife",
                                         "my husband", "our neighbor"};
const std::vector<std::string> kTimes{"yesterday", "last week", "this morning", "on sunday", "every day",
                                      "last year", "tonight", "after work"};
const std::vector<std::string> kDeterminers{"the", "a", "that", "this", "our", "my"};
const std::vector<std::string> kIntensifiers{"really", "pretty", "so", "very"};
const std::vector<std::string> kPreps{"at the", "near the", "by the"};

class SentenceBuilder {
 public:
  SentenceBuilder(const Topic& topic, Rng& rng) : t_(topic), rng_(rng) {}

  std::vector<std::string> build() {
    switch (rng_.index(12)) {
      case 0: add(subject()); add(pick(t_.verbs_past)); np(); maybe_pp(); maybe_time(); break;
      case 1:
        add(subject()); add("went to the"); add(pick(t_.places)); maybe_time();
        if (rng_.bernoulli(0.4)) { add("to"); add(pick(t_.verbs_base)); np(); }
        break;
      case 2: add("did you"); add(pick(t_.verbs_base)); np(); maybe_time(); break;
      case 3: add("it was"); maybe_intensifier(); add(pick(t_.adjectives)); maybe_time(); break;
      case 4: add(rng_.bernoulli(0.5) ? "i think" : "we think"); add(subject()); add(pick(t_.verbs_past)); np(); break;
      case 5: add("we should"); add(pick(t_.verbs_base)); np(); maybe_pp(); break;
      case 6: add("the"); add(pick(t_.nouns)); add("was"); maybe_intensifier(); add(pick(t_.adjectives)); break;
      case 7: add(subject()); add("was going to"); add(pick(t_.verbs_base)); np(); maybe_time(); break;
      case 8: add("there was a"); add(pick(t_.adjectives)); add(pick(t_.nouns)); add("at the"); add(pick(t_.places)); break;
      case 9: add(subject()); add("like to"); add(pick(t_.verbs_base)); add("at the"); add(pick(t_.places)); break;
      case 10: add("do you like"); add(rng_.bernoulli(0.5) ? "the" : "your"); add(pick(t_.nouns)); break;
      default: add("that is why"); add(subject()); add(pick(t_.verbs_past)); np(); maybe_time(); break;
    }
    return words_;
  }

 private:
  const std::string& pick(const std::vector<std::string>& v) { return v[rng_.index(v.size())]; }
  std::string subject() { return pick(kSubjects); }
  void add(const std::string& phrase) {
    for (auto& w : split_words(phrase)) words_.push_back(std::move(w));
  }
  void np() {
    add(pick(kDeterminers));
    if (rng_.bernoulli(0.3)) add(pick(t_.adjectives));
    add(pick(t_.nouns));
  }
  void maybe_pp() {
    if (rng_.bernoulli(0.35)) {
      add(pick(kPreps));
      add(pick(t_.places));
    }
  }
  void maybe_time() {
    if (rng_.bernoulli(0.35)) add(pick(kTimes));
  }
  void maybe_intensifier() {
    if (rng_.bernoulli(0.4)) add(pick(kIntensifiers));
  }

  const Topic& t_;
  Rng& rng_;
  std::vector<std::string> words_;
};

}  // namespace

std::vector<Document> generate_fluent_documents(std::size_t num_docs, std::size_t sentences_per_doc,
                                                std::uint64_t seed) {
  std::vector<Document> docs;
  docs.reserve(num_docs);
  for (std::size_t d = 0; d < num_docs; ++d) {
    Rng rng(Rng::derive(seed, d));
    const Topic& topic = topics()[rng.index(topics().size())];
    Document doc;
    for (std::size_t i = 0; i < sentences_per_doc; ++i) doc.push_back(SentenceBuilder(topic, rng).build());
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<WordSequence> generate_fluent(std::size_t count, std::uint64_t seed) {
  constexpr std::size_t kPerDoc = 10;
  const auto docs = generate_fluent_documents((count + kPerDoc - 1) / kPerDoc, kPerDoc, seed);
  std::vector<WordSequence> out;
  out.reserve(count);
  for (const auto& doc : docs) {
    for (const auto& s : doc) {
      if (out.size() == count) break;
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace disfl
