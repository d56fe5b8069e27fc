// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/reward.hpp"

#include <cmath>

#include "nnfc/errors.hpp"
#include "nnfc/keyvalue_config.hpp"

namespace nnfc {

void RewardWeights::validate() const {
  const double all[] = {w_pos,     sigma_pos, w_up,       k_up,         w_vel,
                        w_angvel,  w_act,     w_act_diff, crash_penalty};
  for (double v : all) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw ConfigError("reward weights must be non-negative and finite");
    }
  }
}

RewardWeights RewardWeights::fromConfig(const KeyValueConfig& cfg) {
  RewardWeights w;
  w.w_pos = cfg.getDouble("reward.w_pos", w.w_pos);
  w.sigma_pos = cfg.getDouble("reward.sigma_pos", w.sigma_pos);
  w.w_up = cfg.getDouble("reward.w_up", w.w_up);
  w.k_up = cfg.getDouble("reward.k_up", w.k_up);
  w.w_vel = cfg.getDouble("reward.w_vel", w.w_vel);
  w.w_angvel = cfg.getDouble("reward.w_angvel", w.w_angvel);
  w.w_act = cfg.getDouble("reward.w_act", w.w_act);
  w.w_act_diff = cfg.getDouble("reward.w_act_diff", w.w_act_diff);
  w.crash_penalty = cfg.getDouble("reward.crash_penalty", w.crash_penalty);
  w.validate();
  return w;
}

double upAlignment(const RigidBodyState& state) {
  return state.attitude.toRotationMatrix()(2, 2);
}

double reward(const RigidBodyState& state, const ActionVec& action,
              const ActionVec& prev_action, const Eigen::Vector3d& setpoint_pos,
              const RewardWeights& weights) {
  const Eigen::Vector3d err = setpoint_pos - state.position;

  double act_sq = 0.0;
  double diff_sq = 0.0;
  for (int i = 0; i < kActDim; ++i) {
    const double a = action[i];
    const double d = a - double(prev_action[i]);
    act_sq += a * a;
    diff_sq += d * d;
  }

  double r = weights.w_pos * std::exp(-err.squaredNorm() / weights.sigma_pos);
  r += weights.w_up * std::exp(-weights.k_up * (1.0 - upAlignment(state)));
  r -= weights.w_vel * state.velocity.norm();
  r -= weights.w_angvel * state.angular_velocity.norm();
  r -= weights.w_act * std::sqrt(act_sq);
  r -= weights.w_act_diff * std::sqrt(diff_sq);
  if (terminated(state, setpoint_pos)) {
    r -= weights.crash_penalty;
  }
  return r;
}

bool terminated(const RigidBodyState& state, const Eigen::Vector3d& setpoint_pos) {
  if (!state.isFinite()) return true;
  if ((setpoint_pos - state.position).norm() > 8.0) return true;
  if (upAlignment(state) < 0.0) return true;
  return false;
}

}  // namespace nnfc
