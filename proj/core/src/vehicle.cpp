// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/vehicle.hpp"

#include <cmath>

#include "nnfc/errors.hpp"
#include "nnfc/keyvalue_config.hpp"

namespace nnfc {

double VehicleParams::hoverSpeed() const {
  return std::sqrt(mass * gravity / (4.0 * k_thrust));
}

double VehicleParams::hoverCommand() const { return hoverSpeed() / omega_max; }

void VehicleParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("vehicle parameter must be strictly positive: ") + name);
    }
  };
  check(mass, "mass");
  check(inertia_diag.x(), "inertia_xx");
  check(inertia_diag.y(), "inertia_yy");
  check(inertia_diag.z(), "inertia_zz");
  check(arm_length, "arm_length");
  check(k_thrust, "k_thrust");
  check(thrust_to_torque, "thrust_to_torque");
  check(motor_tau, "motor_tau");
  check(omega_max, "omega_max");
  check(gravity, "gravity");
}

VehicleParams VehicleParams::fromConfig(const KeyValueConfig& cfg) {
  VehicleParams p;
  p.mass = cfg.getDouble("vehicle.mass");
  p.inertia_diag = Eigen::Vector3d(cfg.getDouble("vehicle.inertia_xx"),
                                   cfg.getDouble("vehicle.inertia_yy"),
                                   cfg.getDouble("vehicle.inertia_zz"));
  p.arm_length = cfg.getDouble("vehicle.arm_length");
  p.k_thrust = cfg.getDouble("vehicle.k_thrust");
  p.thrust_to_torque = cfg.getDouble("vehicle.thrust_to_torque");
  p.motor_tau = cfg.getDouble("vehicle.motor_tau");
  p.omega_max = cfg.getDouble("vehicle.omega_max");
  p.gravity = cfg.getDouble("vehicle.gravity", 9.81);
  p.validate();
  return p;
}

bool RigidBodyState::isFinite() const {
  if (!position.allFinite() || !velocity.allFinite() ||
      !angular_velocity.allFinite()) {
    return false;
  }
  if (!std::isfinite(attitude.w()) || !std::isfinite(attitude.x()) ||
      !std::isfinite(attitude.y()) || !std::isfinite(attitude.z())) {
    return false;
  }
  for (double w : motor_speed) {
    if (!std::isfinite(w)) return false;
  }
  return true;
}

double computeThrustCoefficient(double mass, double hover_speed, double gravity) {
  if (!(mass > 0.0) || !(hover_speed > 0.0) || !(gravity > 0.0)) {
    throw ConfigError("computeThrustCoefficient: all inputs must be > 0");
  }
  return mass * gravity / (4.0 * hover_speed * hover_speed);
}

double motorStep(double current, double commanded, double dt, double tau) {
  return current + (commanded - current) * (1.0 - std::exp(-dt / tau));
}

BodyWrench wrenchFromMotors(const std::array<double, 4>& motor_speed,
                            const VehicleParams& params) {
  const double d = params.arm_length / std::sqrt(2.0);
  BodyWrench w;
  double total_thrust = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double f = params.k_thrust * motor_speed[i] * motor_speed[i];
    total_thrust += f;
    const double x = kMotorXSign[i] * d;
    const double y = kMotorYSign[i] * d;
    // r × (0, 0, -f) for a rotor at (x, y, 0)
    w.torque.x() += -y * f;
    w.torque.y() += x * f;
    w.torque.z() += kMotorYawSign[i] * params.thrust_to_torque * f;
  }
  w.force = Eigen::Vector3d(0.0, 0.0, -total_thrust);
  return w;
}

RigidBodyState integrate(const RigidBodyState& state,
                         const std::array<double, 4>& commanded_speeds,
                         double dt, const VehicleParams& params) {
  RigidBodyState next = state;

  for (int i = 0; i < 4; ++i) {
    const double cmd =
        std::clamp(commanded_speeds[i], 0.0, params.omega_max);
    next.motor_speed[i] = motorStep(state.motor_speed[i], cmd, dt, params.motor_tau);
  }

  const BodyWrench wrench = wrenchFromMotors(next.motor_speed, params);

  const Eigen::Vector3d force_world =
      state.attitude * wrench.force +
      Eigen::Vector3d(0.0, 0.0, params.mass * params.gravity);
  next.velocity = state.velocity + force_world / params.mass * dt;
  next.position = state.position + next.velocity * dt;

  const Eigen::Vector3d& inertia = params.inertia_diag;
  const Eigen::Vector3d inertia_rate = inertia.cwiseProduct(state.angular_velocity);
  const Eigen::Vector3d omega_dot =
      (wrench.torque - state.angular_velocity.cross(inertia_rate))
          .cwiseQuotient(inertia);
  next.angular_velocity = state.angular_velocity + omega_dot * dt;

  const Eigen::Vector3d rotation = next.angular_velocity * dt;
  const double angle = rotation.norm();
  Eigen::Quaterniond dq = Eigen::Quaterniond::Identity();
  if (angle > 0.0) {
    const Eigen::Vector3d axis = rotation / angle;
    const double half = 0.5 * angle;
    const double s = std::sin(half);
    dq = Eigen::Quaterniond(std::cos(half), s * axis.x(), s * axis.y(), s * axis.z());
  }
  next.attitude = (state.attitude * dq).normalized();

  if (!next.isFinite()) {
    throw SimulationDivergedError("integrate produced a non-finite state");
  }
  return next;
}

}  // namespace nnfc
