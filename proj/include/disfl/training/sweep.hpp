// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "disfl/training/trainer.hpp"

namespace disfl {

struct SweepSpace {
  std::vector<double> learning_rate;
  std::vector<std::size_t> batch_size;
  std::vector<std::size_t> epochs;
  std::vector<double> silver_pct;

  std::size_t grid_size() const noexcept;
};

struct SweepTrial {
  TrainConfig config;
  double silver_pct = 0.0;
  double dev_f1 = 0.0;
};

struct SweepResult {
  std::vector<SweepTrial> trials;
  // Index into trials of the winner (earliest on ties).
  std::size_t best = 0;

  const SweepTrial& winner() const { return trials.at(best); }
};

/// Dev F1 for one candidate (config, silver percentage).
using SweepObjective = std::function<double(const TrainConfig&, double silver_pct)>;

/// Seeded random search: evaluates min(trials, grid size) distinct grid points
/// in a seeded order. An empty axis falls back to `base`'s value (silver 0).
SweepResult sweep(const SweepSpace& space, std::size_t trials, std::uint64_t seed, const TrainConfig& base,
                  const SweepObjective& objective);

}  // namespace disfl
