// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "disfl/training/trainer.hpp"

namespace disfl {

struct MixPolicy {
  // Fraction of every batch drawn from silver data.
  double silver_pct = 0.7;

  void validate() const;
  /// round(batch_size * silver_pct)
  std::size_t silver_per_batch(std::size_t batch_size) const;
};

struct MixedBatch {
  std::vector<std::size_t> gold;
  std::vector<std::size_t> silver;
};

/// Batches with exactly round(batch_size * pct) silver members and the rest
/// gold. Gold and silver cycle independently, each through its own seeded
/// shuffle; the gold stream is the same one plain fine-tuning uses.
/// Throws EmptySilverWithPositivePct and EmptyInputCorpus.
class MixedBatchStream {
 public:
  MixedBatchStream(std::size_t gold_size, std::size_t silver_size, const MixPolicy& policy, std::size_t batch_size,
                   std::uint64_t seed);

  MixedBatch next();
  /// ceil over whichever side defines an epoch: gold, or silver if the
  /// batches hold no gold.
  std::size_t steps_per_epoch() const noexcept { return steps_per_epoch_; }

 private:
  std::size_t silver_n_;
  std::size_t gold_n_;
  std::optional<CyclicSampler> gold_, silver_;
  std::size_t steps_per_epoch_ = 0;
};

}  // namespace disfl
