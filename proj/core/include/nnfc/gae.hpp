// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nnfc {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

/// Generalized advantage estimation over one trajectory segment:
///   δ_t = r_t + γ V_{t+1} (1 − done_t) − V_t
///   A_t = δ_t + γ λ (1 − done_t) A_{t+1}
/// with V_T = bootstrap_value. `dones[t]` marks that the episode terminated
/// at step t (no bootstrapping across it). Inputs are the float32 rollout
/// storage; the recursion runs in double precision.
GaeResult gae(std::span<const float> rewards, std::span<const float> values,
              float bootstrap_value, std::span<const uint8_t> dones,
              double gamma, double lambda);

}  // namespace nnfc
