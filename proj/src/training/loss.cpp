// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/training/loss.hpp"

#include <algorithm>
#include <cmath>

#include "disfl/error.hpp"
#include "disfl/tokenizer/encode.hpp"

namespace disfl {

template <class T>
LossResult<T> token_ce_loss(std::span<const T> logits, std::size_t classes, std::span<const std::int32_t> targets) {
  if (classes == 0 || logits.size() != targets.size() * classes) {
    throw Error(ErrorCode::ShapeMismatch, "logits do not match targets x classes");
  }
  LossResult<T> out;
  out.grad.assign(logits.size(), T(0));
  for (std::int32_t t : targets) {
    if (t == kIgnoreTag) continue;
    if (t < 0 || static_cast<std::size_t>(t) >= classes) {
      throw Error(ErrorCode::InvalidArgument, "target " + std::to_string(t) + " outside [0, classes)");
    }
    ++out.count;
  }
  if (out.count == 0) throw Error(ErrorCode::AllPositionsIgnored, "every position carries the ignore tag");
  const double inv = 1.0 / static_cast<double>(out.count);
  std::vector<double> p(classes);
  double total = 0.0;
  for (std::size_t r = 0; r < targets.size(); ++r) {
    if (targets[r] == kIgnoreTag) continue;
    const T* row = logits.data() + r * classes;
    double mx = static_cast<double>(*std::max_element(row, row + classes));
    double z = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      p[c] = std::exp(static_cast<double>(row[c]) - mx);
      z += p[c];
    }
    const auto t = static_cast<std::size_t>(targets[r]);
    total += std::log(z) - (static_cast<double>(row[t]) - mx);
    T* g = out.grad.data() + r * classes;
    for (std::size_t c = 0; c < classes; ++c) {
      g[c] = static_cast<T>((p[c] / z - (c == t ? 1.0 : 0.0)) * inv);
    }
  }
  out.loss = total * inv;
  return out;
}

template LossResult<float> token_ce_loss<float>(std::span<const float>, std::size_t, std::span<const std::int32_t>);
template LossResult<double> token_ce_loss<double>(std::span<const double>, std::size_t, std::span<const std::int32_t>);

}  // namespace disfl
