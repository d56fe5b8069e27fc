// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "nnfc/vehicle.hpp"

namespace nnfc {

inline constexpr int kObsDim = 15;
inline constexpr int kActDim = 4;

/// Policy input: [pos_error(3), orient_6d(6), velocity(3), angular_velocity(3)].
/// pos_error is setpoint − position in world NED, clamped to ±5 m per
/// component; orient_6d holds the first two columns of the body→world rotation
/// matrix; velocity is world NED; angular velocity is body frame.
using Observation = std::array<float, kObsDim>;

/// Motor action in [-1, 1]^4 (tanh-squashed policy output).
using ActionVec = std::array<float, kActDim>;

inline constexpr float kPosErrorClamp = 5.0f;

/// Single observation definition shared by training and deployment.
Observation buildObservation(const RigidBodyState& state,
                             const Eigen::Vector3d& setpoint_pos);

/// Maps a squashed action to normalized rotor commands: u = (a + 1) / 2.
std::array<double, 4> actionToMotorCommand(const ActionVec& action);

}  // namespace nnfc
