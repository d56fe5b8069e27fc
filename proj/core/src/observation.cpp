// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/observation.hpp"

#include <algorithm>

namespace nnfc {

Observation buildObservation(const RigidBodyState& state,
                             const Eigen::Vector3d& setpoint_pos) {
  Observation obs;
  const Eigen::Vector3d err = setpoint_pos - state.position;
  const Eigen::Matrix3d rot = state.attitude.toRotationMatrix();

  for (int i = 0; i < 3; ++i) {
    obs[i] = static_cast<float>(
        std::clamp(err[i], -double(kPosErrorClamp), double(kPosErrorClamp)));
  }
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < 3; ++r) {
      obs[3 + 3 * c + r] = static_cast<float>(rot(r, c));
    }
  }
  for (int i = 0; i < 3; ++i) {
    obs[9 + i] = static_cast<float>(state.velocity[i]);
  }
  for (int i = 0; i < 3; ++i) {
    obs[12 + i] = static_cast<float>(state.angular_velocity[i]);
  }
  return obs;
}

std::array<double, 4> actionToMotorCommand(const ActionVec& action) {
  std::array<double, 4> u{};
  for (int i = 0; i < 4; ++i) {
    u[i] = (static_cast<double>(action[i]) + 1.0) * 0.5;
  }
  return u;
}

}  // namespace nnfc
