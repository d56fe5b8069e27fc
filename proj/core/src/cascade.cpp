// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/cascade.hpp"

#include <algorithm>
#include <cmath>

#include "nnfc/errors.hpp"
#include "nnfc/keyvalue_config.hpp"

namespace nnfc {

namespace {

constexpr double kIntegratorLimit = 0.3;  // anti-windup clamp, normalized units

Eigen::Vector3d axisGains(const KeyValueConfig& cfg, const std::string& key,
                          const Eigen::Vector3d& fallback) {
  Eigen::Vector3d v = fallback;
  if (cfg.has(key)) v.setConstant(cfg.getDouble(key));
  if (cfg.has(key + "_z")) v.z() = cfg.getDouble(key + "_z");
  return v;
}

}  // namespace

double yawOf(const Eigen::Quaterniond& q) {
  const Eigen::Matrix3d r = q.toRotationMatrix();
  return std::atan2(r(1, 0), r(0, 0));
}

void CascadeGains::validate() const {
  auto nonneg = [](const Eigen::Vector3d& v, const char* name) {
    if ((v.array() < 0.0).any()) {
      throw ConfigError(std::string("cascade gain must be >= 0: ") + name);
    }
  };
  nonneg(pos_p, "pos_p");
  nonneg(vel_p, "vel_p");
  nonneg(vel_i, "vel_i");
  nonneg(vel_d, "vel_d");
  nonneg(att_p, "att_p");
  nonneg(rate_p, "rate_p");
  nonneg(rate_i, "rate_i");
  nonneg(rate_d, "rate_d");
  if (!(hover_throttle > 0.0 && hover_throttle < 1.0)) {
    throw ConfigError("hover_throttle must lie in (0, 1)");
  }
  if (!(max_tilt > 0.0 && max_tilt < M_PI / 2.0)) {
    throw ConfigError("max_tilt must lie in (0, pi/2)");
  }
  if (!(max_vel > 0.0)) throw ConfigError("max_vel must be > 0");
}

CascadeGains CascadeGains::fromConfig(const KeyValueConfig& cfg) {
  CascadeGains g;
  g.pos_p = axisGains(cfg, "gains.pos_p", g.pos_p);
  g.vel_p = axisGains(cfg, "gains.vel_p", g.vel_p);
  g.vel_i = axisGains(cfg, "gains.vel_i", g.vel_i);
  g.vel_d = axisGains(cfg, "gains.vel_d", g.vel_d);
  g.att_p = axisGains(cfg, "gains.att_p", g.att_p);
  g.rate_p = axisGains(cfg, "gains.rate_p", g.rate_p);
  g.rate_i = axisGains(cfg, "gains.rate_i", g.rate_i);
  g.rate_d = axisGains(cfg, "gains.rate_d", g.rate_d);
  g.max_tilt = cfg.getDouble("gains.max_tilt", g.max_tilt);
  g.max_vel = cfg.getDouble("gains.max_vel", g.max_vel);
  g.hover_throttle = cfg.getDouble("gains.hover_throttle", g.hover_throttle);
  g.validate();
  return g;
}

std::array<double, 4> mixMotors(double thrust, const Eigen::Vector3d& torque) {
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    const double roll = -kMotorYSign[i];  // thrust at +y pushes roll negative
    const double pitch = kMotorXSign[i];
    const double yaw = kMotorYawSign[i];
    const double cmd = thrust + 0.25 * (roll * torque.x() + pitch * torque.y() +
                                        yaw * torque.z());
    out[i] = std::clamp(cmd, 0.0, 1.0);
  }
  return out;
}

void CascadeController::reset() {
  vel_integrator_.setZero();
  rate_integrator_.setZero();
  yaw_latched_ = false;
}

Eigen::Vector3d CascadeController::positionLoop(
    const RigidBodyState& state, const Eigen::Vector3d& setpoint) const {
  Eigen::Vector3d v_sp = gains_.pos_p.cwiseProduct(setpoint - state.position);
  const double n = v_sp.norm();
  if (n > gains_.max_vel) v_sp *= gains_.max_vel / n;
  return v_sp;
}

CascadeController::VelocityLoopOutput CascadeController::velocityLoop(
    const RigidBodyState& state, const Eigen::Vector3d& velocity_setpoint,
    double dt) {
  if (!yaw_latched_) {
    yaw_hold_ = yawOf(state.attitude);
    yaw_latched_ = true;
  }

  const double g = params_.gravity;
  const Eigen::Vector3d v_err = velocity_setpoint - state.velocity;

  // Kinematic acceleration recovered from the current rotor speeds; the ideal
  // stand-in for the accelerometer-derived velocity derivative.
  const BodyWrench wrench = wrenchFromMotors(state.motor_speed, params_);
  const Eigen::Vector3d accel =
      state.attitude * wrench.force / params_.mass + Eigen::Vector3d(0, 0, g);

  vel_integrator_ += gains_.vel_i.cwiseProduct(v_err) * dt / g;
  vel_integrator_ = vel_integrator_.cwiseMax(-kIntegratorLimit).cwiseMin(kIntegratorLimit);

  // Desired specific force in units of g, gravity feedforward along world -z.
  const Eigen::Vector3d accel_norm = gains_.vel_p.cwiseProduct(v_err) / g +
                                     vel_integrator_ -
                                     gains_.vel_d.cwiseProduct(accel) / g;
  const Eigen::Vector3d force_norm = accel_norm - Eigen::Vector3d(0, 0, 1);

  Eigen::Vector3d body_z_des(0, 0, 1);
  const double force_mag = force_norm.norm();
  if (force_mag > 1e-9) body_z_des = -force_norm / force_mag;

  // Clamp the tilt between desired body z and straight down.
  const double cos_tilt = std::clamp(body_z_des.z(), -1.0, 1.0);
  const double tilt = std::acos(cos_tilt);
  if (tilt > gains_.max_tilt) {
    const Eigen::Vector3d horiz(body_z_des.x(), body_z_des.y(), 0.0);
    const double hn = horiz.norm();
    if (hn > 1e-12) {
      body_z_des = std::cos(gains_.max_tilt) * Eigen::Vector3d(0, 0, 1) +
                   std::sin(gains_.max_tilt) * horiz / hn;
    } else {
      body_z_des = Eigen::Vector3d(0, 0, 1);
    }
  }

  const Eigen::Vector3d x_c(std::cos(yaw_hold_), std::sin(yaw_hold_), 0.0);
  Eigen::Vector3d y_b = body_z_des.cross(x_c);
  y_b.normalize();
  const Eigen::Vector3d x_b = y_b.cross(body_z_des);

  Eigen::Matrix3d r_des;
  r_des.col(0) = x_b;
  r_des.col(1) = y_b;
  r_des.col(2) = body_z_des;

  VelocityLoopOutput out;
  out.attitude_setpoint = Eigen::Quaterniond(r_des).normalized();
  // Rotor command follows the square-root of the demanded thrust fraction.
  out.thrust = std::clamp(gains_.hover_throttle * std::sqrt(force_mag), 0.0, 1.0);
  return out;
}

Eigen::Vector3d CascadeController::attitudeLoop(
    const RigidBodyState& state, const Eigen::Quaterniond& attitude_setpoint) const {
  Eigen::Quaterniond q_err = state.attitude.conjugate() * attitude_setpoint;
  if (q_err.w() < 0.0) q_err.coeffs() = -q_err.coeffs();
  return 2.0 * gains_.att_p.cwiseProduct(q_err.vec());
}

Eigen::Vector3d CascadeController::rateLoop(const RigidBodyState& state,
                                            const Eigen::Vector3d& rate_setpoint,
                                            double dt) {
  const Eigen::Vector3d err = rate_setpoint - state.angular_velocity;

  rate_integrator_ += gains_.rate_i.cwiseProduct(err) * dt;
  rate_integrator_ =
      rate_integrator_.cwiseMax(-kIntegratorLimit).cwiseMin(kIntegratorLimit);

  const BodyWrench wrench = wrenchFromMotors(state.motor_speed, params_);
  const Eigen::Vector3d inertia_rate =
      params_.inertia_diag.cwiseProduct(state.angular_velocity);
  const Eigen::Vector3d omega_dot =
      (wrench.torque - state.angular_velocity.cross(inertia_rate))
          .cwiseQuotient(params_.inertia_diag);

  const Eigen::Vector3d torque = gains_.rate_p.cwiseProduct(err) +
                                 rate_integrator_ -
                                 gains_.rate_d.cwiseProduct(omega_dot);
  return torque.cwiseMax(-1.0).cwiseMin(1.0);
}

std::array<double, 4> CascadeController::tick(
    const RigidBodyState& state, const Eigen::Vector3d& position_setpoint,
    double dt) {
  const Eigen::Vector3d v_sp = positionLoop(state, position_setpoint);
  const VelocityLoopOutput vel_out = velocityLoop(state, v_sp, dt);
  const Eigen::Vector3d rate_sp = attitudeLoop(state, vel_out.attitude_setpoint);
  const Eigen::Vector3d torque = rateLoop(state, rate_sp, dt);
  return mixMotors(vel_out.thrust, torque);
}

}  // namespace nnfc
