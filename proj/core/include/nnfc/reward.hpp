// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nnfc/observation.hpp"
#include "nnfc/vehicle.hpp"

namespace nnfc {

class KeyValueConfig;

/// Shaping weights for the tracking reward. All dimensionless multipliers.
struct RewardWeights {
  double w_pos = 1.0;
  double sigma_pos = 0.8;  // m^2
  double w_up = 0.2;
  double k_up = 10.0;
  double w_vel = 0.05;
  double w_angvel = 0.01;
  double w_act = 0.02;
  double w_act_diff = 0.05;
  double crash_penalty = 10.0;

  void validate() const;
  static RewardWeights fromConfig(const KeyValueConfig& cfg);
};

/// Up-alignment of the thrust axis: element (2,2) of the body→world rotation
/// matrix (1 when level, -1 when inverted).
double upAlignment(const RigidBodyState& state);

/// r = w_pos e^{-|e|²/σ} + w_up e^{-k_up (1-u_z)} − w_vel|v| − w_angvel|ω|
///     − w_act|a| − w_act_diff|a−a_prev|, minus crash_penalty when the
/// termination predicate fires.
double reward(const RigidBodyState& state, const ActionVec& action,
              const ActionVec& prev_action, const Eigen::Vector3d& setpoint_pos,
              const RewardWeights& weights);

/// True iff position error exceeds 8 m, the vehicle is inverted (u_z < 0),
/// or any state component is non-finite.
bool terminated(const RigidBodyState& state, const Eigen::Vector3d& setpoint_pos);

}  // namespace nnfc
