// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace disfl {

template <class T>
struct LossResult {
  double loss = 0.0;
  // Positions that contributed (targets != kIgnoreTag).
  std::size_t count = 0;
  // d loss / d logits, same shape as the logits.
  std::vector<T> grad;
};

/// Mean softmax cross-entropy over rows whose target is not kIgnoreTag.
/// `logits` is row-major [targets.size(), classes]. Ignored rows receive zero
/// gradient. Throws AllPositionsIgnored when every target is ignored and
/// InvalidArgument for targets outside [0, classes).
template <class T>
LossResult<T> token_ce_loss(std::span<const T> logits, std::size_t classes, std::span<const std::int32_t> targets);

extern template LossResult<float> token_ce_loss<float>(std::span<const float>, std::size_t,
                                                       std::span<const std::int32_t>);
extern template LossResult<double> token_ce_loss<double>(std::span<const double>, std::size_t,
                                                         std::span<const std::int32_t>);

}  // namespace disfl
