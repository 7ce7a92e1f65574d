// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace disfl {

enum class Schedule { LinearToZero, Constant };
std::string_view to_string(Schedule s);
Schedule parse_schedule(std::string_view text);

/// Learning rate for 0-based step t of T: lr * (1 - t / T) or constant.
double scheduled_lr(double base_lr, Schedule schedule, std::uint64_t t, std::uint64_t total);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-6;
  double weight_decay = 0.01;
};

struct AdamState {
  std::vector<float> m;
  std::vector<float> v;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0f), v(n, 0.0f) {}
};

/// One AdamW update with bias correction. Weight decay is decoupled and only
/// applied where `decay` is nonzero (empty means everywhere).
/// Throws NonFiniteGradient before touching params or state.
void adam_step(std::span<float> params, std::span<const float> grads, AdamState& state, double lr,
               const AdamConfig& config, std::span<const std::uint8_t> decay = {});

}  // namespace disfl
