// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/training/finetune.hpp"

#include "disfl/error.hpp"

namespace disfl {

TrainResult finetune(const Checkpoint& init, const Vocab& vocab, std::span<const LabeledSequence> gold,
                     std::span<const LabeledSequence> dev, const TrainConfig& config) {
  config.validate();
  if (gold.empty()) throw Error(ErrorCode::EmptyInputCorpus, "fine-tuning needs at least one gold sentence");
  const auto pool = encode_corpus(gold, vocab, init.config.max_positions);
  CyclicSampler sampler(pool.size(), stream_seed(config.seed, Stream::Gold));
  TrainPlan plan;
  plan.pool = pool;
  plan.steps_per_epoch = (pool.size() + config.batch_size - 1) / config.batch_size;
  plan.next_batch = [&] {
    std::vector<std::size_t> idx(config.batch_size);
    for (auto& i : idx) i = sampler.next();
    return idx;
  };
  return train_tagger(init, vocab, plan, dev, config);
}

}  // namespace disfl
