// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/selftrain/mixing.hpp"

#include <cmath>

#include "disfl/error.hpp"

namespace disfl {

void MixPolicy::validate() const {
  if (!(silver_pct >= 0.0 && silver_pct <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "silver_pct must be in [0, 1]");
  }
}

std::size_t MixPolicy::silver_per_batch(std::size_t batch_size) const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(batch_size) * silver_pct));
}

MixedBatchStream::MixedBatchStream(std::size_t gold_size, std::size_t silver_size, const MixPolicy& policy,
                                   std::size_t batch_size, std::uint64_t seed) {
  policy.validate();
  if (batch_size == 0) throw Error(ErrorCode::InvalidArgument, "batch_size must be >= 1");
  silver_n_ = policy.silver_per_batch(batch_size);
  gold_n_ = batch_size - silver_n_;
  if (policy.silver_pct > 0.0 && silver_size == 0) {
    throw Error(ErrorCode::EmptySilverWithPositivePct, "silver_pct > 0 but the silver corpus is empty");
  }
  if (gold_size == 0) throw Error(ErrorCode::EmptyInputCorpus, "mixing needs gold data");
  if (gold_n_ > 0) gold_.emplace(gold_size, stream_seed(seed, Stream::Gold));
  if (silver_n_ > 0) silver_.emplace(silver_size, stream_seed(seed, Stream::Silver));
  steps_per_epoch_ = gold_n_ > 0 ? (gold_size + gold_n_ - 1) / gold_n_ : (silver_size + silver_n_ - 1) / silver_n_;
}

MixedBatch MixedBatchStream::next() {
  MixedBatch b;
  b.gold.reserve(gold_n_);
  b.silver.reserve(silver_n_);
  for (std::size_t i = 0; i < gold_n_; ++i) b.gold.push_back(gold_->next());
  for (std::size_t i = 0; i < silver_n_; ++i) b.silver.push_back(silver_->next());
  return b;
}

}  // namespace disfl
