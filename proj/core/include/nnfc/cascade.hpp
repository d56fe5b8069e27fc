// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <array>

#include "nnfc/vehicle.hpp"

namespace nnfc {

class KeyValueConfig;

/// Gains for the position → velocity → attitude → body-rate cascade.
/// Scalars broadcast to all axes in the config; `_z` keys override axis 2.
struct CascadeGains {
  Eigen::Vector3d pos_p{1.2, 1.2, 1.2};      // 1/s
  Eigen::Vector3d vel_p{2.5, 2.5, 2.5};
  Eigen::Vector3d vel_i{0.4, 0.4, 0.4};
  Eigen::Vector3d vel_d{0.05, 0.05, 0.05};
  Eigen::Vector3d att_p{6.0, 6.0, 6.0};      // 1/s
  Eigen::Vector3d rate_p{0.15, 0.15, 0.15};
  Eigen::Vector3d rate_i{0.05, 0.05, 0.05};
  Eigen::Vector3d rate_d{0.003, 0.003, 0.003};
  double max_tilt = 0.6;        // rad
  double max_vel = 3.0;         // m/s
  double hover_throttle = 0.79618;  // normalized rotor command at hover

  void validate() const;
  static CascadeGains fromConfig(const KeyValueConfig& cfg);
};

/// Per-motor command from collective thrust plus normalized body torques.
/// Rows of the allocation matrix are the quad-X sign table scaled by 1/4.
std::array<double, 4> mixMotors(double thrust, const Eigen::Vector3d& torque);

/// PX4-style cascaded controller used for takeoff, landing and fallback.
/// Owns the velocity/rate integrators and the yaw-hold latch; reset() must be
/// called when (re)entering position mode.
class CascadeController {
 public:
  CascadeController(const CascadeGains& gains, const VehicleParams& params)
      : gains_(gains), params_(params) {}

  /// Clears integrators and re-latches yaw on the next tick.
  void reset();

  const CascadeGains& gains() const { return gains_; }

  /// v_sp = pos_p ⊙ (setpoint − position), norm-clamped to max_vel.
  Eigen::Vector3d positionLoop(const RigidBodyState& state,
                               const Eigen::Vector3d& setpoint) const;

  struct VelocityLoopOutput {
    double thrust = 0.0;  // normalized rotor command
    Eigen::Quaterniond attitude_setpoint = Eigen::Quaterniond::Identity();
  };

  /// PID on velocity error with hover feedforward. The derivative term acts on
  /// the vehicle acceleration reconstructed from the rotor speeds, so the loop
  /// is memoryless whenever vel_i = 0. Tilt is clamped to max_tilt and yaw is
  /// held at the latched value.
  VelocityLoopOutput velocityLoop(const RigidBodyState& state,
                                  const Eigen::Vector3d& velocity_setpoint,
                                  double dt);

  /// Shortest-rotation quaternion error, rate_sp = 2 att_p ⊙ vec(q_err).
  Eigen::Vector3d attitudeLoop(const RigidBodyState& state,
                               const Eigen::Quaterniond& attitude_setpoint) const;

  /// PID on body-rate error; per-axis output clamped to [-1, 1]. The
  /// derivative acts on the angular acceleration reconstructed from the
  /// current wrench.
  Eigen::Vector3d rateLoop(const RigidBodyState& state,
                           const Eigen::Vector3d& rate_setpoint, double dt);

  /// Full chain: position → velocity → attitude → rate → mixer.
  std::array<double, 4> tick(const RigidBodyState& state,
                             const Eigen::Vector3d& position_setpoint, double dt);

 private:
  CascadeGains gains_;
  VehicleParams params_;
  Eigen::Vector3d vel_integrator_ = Eigen::Vector3d::Zero();   // g-normalized
  Eigen::Vector3d rate_integrator_ = Eigen::Vector3d::Zero();  // torque-normalized
  bool yaw_latched_ = false;
  double yaw_hold_ = 0.0;
};

/// Yaw (about world z) of a body->world quaternion, ZYX convention.
double yawOf(const Eigen::Quaterniond& q);

}  // namespace nnfc
