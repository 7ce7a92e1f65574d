// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/training/sweep.hpp"

#include <numeric>

#include "disfl/error.hpp"
#include "disfl/rng.hpp"

namespace disfl {

namespace {

template <class T>
std::size_t axis(const std::vector<T>& v) {
  return v.empty() ? 1 : v.size();
}

}  // namespace

std::size_t SweepSpace::grid_size() const noexcept {
  return axis(learning_rate) * axis(batch_size) * axis(epochs) * axis(silver_pct);
}

SweepResult sweep(const SweepSpace& space, std::size_t trials, std::uint64_t seed, const TrainConfig& base,
                  const SweepObjective& objective) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one trial");
  const std::size_t grid = space.grid_size();
  std::vector<std::size_t> order(grid);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  order.resize(std::min(trials, grid));

  SweepResult result;
  for (std::size_t code : order) {
    SweepTrial t;
    t.config = base;
    std::size_t rest = code;
    auto pick = [&rest](const auto& values, auto& target) {
      const std::size_t n = axis(values);
      if (!values.empty()) target = values[rest % n];
      rest /= n;
    };
    pick(space.learning_rate, t.config.learning_rate);
    pick(space.batch_size, t.config.batch_size);
    pick(space.epochs, t.config.epochs);
    pick(space.silver_pct, t.silver_pct);
    t.config.validate();
    t.dev_f1 = objective(t.config, t.silver_pct);
    result.trials.push_back(t);
    if (t.dev_f1 > result.trials[result.best].dev_f1) result.best = result.trials.size() - 1;
  }
  return result;
}

}  // namespace disfl
