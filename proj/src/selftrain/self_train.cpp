// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/selftrain/self_train.hpp"

#include "disfl/error.hpp"

namespace disfl {

TrainResult self_train(const Checkpoint& student_init, const Vocab& vocab, std::span<const LabeledSequence> gold,
                       const SilverCorpus& silver, std::span<const LabeledSequence> dev, const TrainConfig& config,
                       const MixPolicy& policy) {
  config.validate();
  policy.validate();
  if (policy.silver_pct > 0.0) silver.validate();
  if (gold.empty()) throw Error(ErrorCode::EmptyInputCorpus, "self-training needs at least one gold sentence");
  require_no_silver(gold, "gold");

  MixedBatchStream stream(gold.size(), silver.sequences.size(), policy, config.batch_size, config.seed);
  std::vector<EncodedSequence> pool = encode_corpus(gold, vocab, student_init.config.max_positions);
  const std::size_t silver_base = pool.size();
  if (policy.silver_pct > 0.0) {
    auto encoded = encode_corpus(silver.sequences, vocab, student_init.config.max_positions);
    pool.insert(pool.end(), std::make_move_iterator(encoded.begin()), std::make_move_iterator(encoded.end()));
  }

  TrainPlan plan;
  plan.pool = pool;
  plan.steps_per_epoch = stream.steps_per_epoch();
  plan.silver_pct = policy.silver_pct;
  plan.next_batch = [&] {
    const MixedBatch b = stream.next();
    std::vector<std::size_t> idx = b.gold;
    for (std::size_t s : b.silver) idx.push_back(silver_base + s);
    return idx;
  };
  return train_tagger(student_init, vocab, plan, dev, config);
}

IterateResult iterate(const Checkpoint& teacher0, const Checkpoint& student_init, const Vocab& vocab,
                      std::span<const LabeledSequence> gold, std::span<const WordSequence> unlabeled,
                      std::span<const LabeledSequence> dev, const TrainConfig& config, const MixPolicy& policy,
                      std::size_t rounds) {
  if (rounds == 0) throw Error(ErrorCode::InvalidArgument, "iterate needs at least one round");
  IterateResult out;
  Checkpoint teacher = teacher0;
  SilverCorpus previous;
  for (std::size_t round = 0; round < rounds; ++round) {
    SilverCorpus silver = label_silver(teacher, vocab, unlabeled);
    if (round > 0) out.silver_agreement.push_back(label_agreement(previous, silver));
    TrainResult r = self_train(student_init, vocab, gold, silver, dev, config, policy);
    out.round_dev_f1.push_back(r.best_dev_f1);
    out.histories.push_back(std::move(r.history));
    if (round == 0 || r.best_dev_f1 > out.round_dev_f1[out.best_round]) {
      out.best_round = round;
      out.best = r.best;
    }
    teacher = std::move(r.best);
    previous = std::move(silver);
  }
  return out;
}

}  // namespace disfl
