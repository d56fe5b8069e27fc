// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <array>

namespace nnfc {

class KeyValueConfig;

/// Identified physical model of the quad-X platform. World frame is NED,
/// body frame is FRD, thrust acts along body -z.
struct VehicleParams {
  double mass = 1.2;                                  // kg
  Eigen::Vector3d inertia_diag{0.0117, 0.0117, 0.0222};  // kg m^2, body axes
  double arm_length = 0.21;       // m, hub to motor
  double k_thrust = 2.943e-6;     // N s^2 / rad^2, thrust = k ω^2
  double thrust_to_torque = 0.016;  // m, yaw torque per unit thrust
  double motor_tau = 0.05;        // s, first-order rotor lag
  double omega_max = 1256.0;      // rad/s
  double gravity = 9.81;          // m/s^2

  /// Rotor speed at which four motors exactly balance gravity.
  double hoverSpeed() const;
  /// Normalized RPM command corresponding to hover (hoverSpeed / omega_max).
  double hoverCommand() const;

  /// Throws ConfigError unless every parameter is strictly positive.
  void validate() const;

  static VehicleParams fromConfig(const KeyValueConfig& cfg);
};

/// Pose, twist and rotor speeds of the simulated vehicle.
/// attitude rotates body-frame vectors into the world frame (scalar-first).
struct RigidBodyState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();   // m, world NED
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();   // m/s, world NED
  Eigen::Quaterniond attitude = Eigen::Quaterniond::Identity();  // body FRD -> world NED
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();    // rad/s, body
  std::array<double, 4> motor_speed{0.0, 0.0, 0.0, 0.0};  // rad/s

  bool isFinite() const;
};

/// Net force/torque produced by the rotors, expressed in the body frame.
struct BodyWrench {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();   // N
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();  // N m
};

// Quad-X layout: motor 1 front-right, 2 back-left, 3 front-left, 4 back-right,
// at (±arm/√2, ±arm/√2, 0). Motors 1 and 2 spin CCW (yaw torque +z), 3 and 4 CW.
inline constexpr double kMotorXSign[4] = {+1.0, -1.0, +1.0, -1.0};
inline constexpr double kMotorYSign[4] = {+1.0, -1.0, -1.0, +1.0};
inline constexpr double kMotorYawSign[4] = {+1.0, +1.0, -1.0, -1.0};

/// k = m g / (4 ω_h²): four motors at hover_speed exactly balance gravity.
/// Throws ConfigError on non-positive input.
double computeThrustCoefficient(double mass, double hover_speed, double gravity);

/// First-order rotor lag toward the commanded speed; identical time constant
/// for increasing and decreasing commands. Inputs are pre-validated.
double motorStep(double current, double commanded, double dt, double tau);

BodyWrench wrenchFromMotors(const std::array<double, 4>& motor_speed,
                            const VehicleParams& params);

/// One fixed-dt physics step: rotor lag, wrench from the new speeds,
/// semi-implicit Euler translation, Euler rotational dynamics, quaternion
/// exponential update with renormalization. Commanded speeds are clamped to
/// [0, omega_max]. Throws SimulationDivergedError when the output state is
/// non-finite.
RigidBodyState integrate(const RigidBodyState& state,
                         const std::array<double, 4>& commanded_speeds,
                         double dt, const VehicleParams& params);

}  // namespace nnfc
