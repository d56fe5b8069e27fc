// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/gae.hpp"

#include <stdexcept>

namespace nnfc {

GaeResult gae(std::span<const float> rewards, std::span<const float> values,
              float bootstrap_value, std::span<const uint8_t> dones,
              double gamma, double lambda) {
  const size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) {
    throw std::invalid_argument("gae: input lengths differ");
  }
  GaeResult result;
  result.advantages.resize(n);
  result.returns.resize(n);

  double next_advantage = 0.0;
  double next_value = bootstrap_value;
  for (size_t t = n; t-- > 0;) {
    const double not_done = dones[t] ? 0.0 : 1.0;
    const double delta =
        double(rewards[t]) + gamma * next_value * not_done - double(values[t]);
    const double advantage = delta + gamma * lambda * not_done * next_advantage;
    result.advantages[t] = advantage;
    result.returns[t] = advantage + double(values[t]);
    next_advantage = advantage;
    next_value = double(values[t]);
  }
  return result;
}

}  // namespace nnfc
