// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/training/adam.hpp"

#include <cmath>

#include "disfl/error.hpp"

namespace disfl {

std::string_view to_string(Schedule s) { return s == Schedule::LinearToZero ? "linear" : "constant"; }

Schedule parse_schedule(std::string_view text) {
  if (text == "linear") return Schedule::LinearToZero;
  if (text == "constant") return Schedule::Constant;
  throw Error(ErrorCode::InvalidArgument, "unknown schedule '" + std::string(text) + "' (linear|constant)");
}

double scheduled_lr(double base_lr, Schedule schedule, std::uint64_t t, std::uint64_t total) {
  if (schedule == Schedule::Constant || total == 0) return base_lr;
  if (t >= total) return 0.0;
  return base_lr * (1.0 - static_cast<double>(t) / static_cast<double>(total));
}

void adam_step(std::span<float> params, std::span<const float> grads, AdamState& state, double lr,
               const AdamConfig& config, std::span<const std::uint8_t> decay) {
  const std::size_t n = params.size();
  if (grads.size() != n || state.m.size() != n || state.v.size() != n || (!decay.empty() && decay.size() != n)) {
    throw Error(ErrorCode::ShapeMismatch, "optimizer state does not match parameters");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grads[i])) {
      throw Error(ErrorCode::NonFiniteGradient, "non-finite gradient at parameter " + std::to_string(i) +
                                                    " (step " + std::to_string(state.step + 1) + ")");
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  const float b1 = static_cast<float>(config.beta1), b2 = static_cast<float>(config.beta2);
  for (std::size_t i = 0; i < n; ++i) {
    const float g = grads[i];
    state.m[i] = b1 * state.m[i] + (1.0f - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0f - b2) * g * g;
    const double mhat = static_cast<double>(state.m[i]) / c1;
    const double vhat = static_cast<double>(state.v[i]) / c2;
    double update = mhat / (std::sqrt(vhat) + config.eps);
    if (decay.empty() || decay[i] != 0) update += config.weight_decay * static_cast<double>(params[i]);
    params[i] = static_cast<float>(static_cast<double>(params[i]) - lr * update);
  }
}

}  // namespace disfl
