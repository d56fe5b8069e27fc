// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/flight_stack.hpp"

#include <cmath>
#include <cstdio>

#include "nnfc/errors.hpp"
#include "nnfc/keyvalue_config.hpp"
#include "nnfc/reward.hpp"

namespace nnfc {

FlightMode modeSwitch(FlightMode current, FlightCommand command, bool airborne,
                      bool fault, bool* rejected) {
  if (rejected) *rejected = false;

  // Safety rule first: any fault in neural mode falls back immediately.
  if (fault && current == FlightMode::kNeuralMode) {
    return FlightMode::kPositionMode;
  }

  switch (command) {
    case FlightCommand::kNone:
      return current;
    case FlightCommand::kArm:
      if (current == FlightMode::kDisarmed) return FlightMode::kPositionMode;
      break;
    case FlightCommand::kEnterNeural:
      if (current == FlightMode::kPositionMode && airborne) {
        return FlightMode::kNeuralMode;
      }
      break;
    case FlightCommand::kEnterPosition:
      if (current == FlightMode::kNeuralMode && airborne) {
        return FlightMode::kPositionMode;
      }
      break;
    case FlightCommand::kDisarm:
      if (current == FlightMode::kPositionMode && !airborne) {
        return FlightMode::kDisarmed;
      }
      break;
  }
  if (rejected) *rejected = true;
  return current;
}

ControlOutput controllerTick(FlightMode mode, const RigidBodyState& state,
                             const Eigen::Vector3d& setpoint, double dt,
                             CascadeController& cascade, InferenceRuntime* runtime) {
  ControlOutput out;
  switch (mode) {
    case FlightMode::kDisarmed:
      break;
    case FlightMode::kPositionMode:
      out.motors = cascade.tick(state, setpoint, dt);
      break;
    case FlightMode::kNeuralMode: {
      cascade.reset();  // fallback must re-engage with clean integrators
      if (runtime == nullptr) {
        out.fault = true;
        break;
      }
      Observation obs;
      if (!runtime->preprocess(state.position, state.velocity, state.attitude,
                               state.angular_velocity, setpoint, obs)) {
        out.fault = true;
        break;
      }
      ActionVec action;
      if (!runtime->infer(obs, action)) {
        out.fault = true;
        break;
      }
      out.motors = InferenceRuntime::postprocess(action);
      break;
    }
  }
  return out;
}

ScenarioConfig ScenarioConfig::fromConfig(const KeyValueConfig& cfg) {
  ScenarioConfig s;
  s.use_neural = cfg.getInt("scenario.use_neural", s.use_neural ? 1 : 0) != 0;
  s.model_path = cfg.getString("scenario.model", s.model_path);
  s.seed = uint64_t(cfg.getInt("scenario.seed", int(s.seed)));
  s.rate_hz = cfg.getDouble("scenario.rate_hz", s.rate_hz);
  s.takeoff_speed = cfg.getDouble("scenario.takeoff_speed", s.takeoff_speed);
  s.mission_center = Eigen::Vector3d(
      cfg.getDouble("scenario.mission_center_x", s.mission_center.x()),
      cfg.getDouble("scenario.mission_center_y", s.mission_center.y()),
      cfg.getDouble("scenario.mission_center_z", s.mission_center.z()));
  s.mission_side = cfg.getDouble("scenario.mission_side", s.mission_side);
  s.accept_radius = cfg.getDouble("scenario.accept_radius", s.accept_radius);
  s.dwell_s = cfg.getDouble("scenario.dwell", s.dwell_s);
  s.leg_timeout_s = cfg.getDouble("scenario.leg_timeout", s.leg_timeout_s);
  s.max_duration_s = cfg.getDouble("scenario.max_duration", s.max_duration_s);
  s.budget_bytes = size_t(cfg.getInt("scenario.budget_bytes", int(s.budget_bytes)));
  s.fault_inject_tick = cfg.getInt("scenario.fault_inject_tick", -1);
  if (!(s.rate_hz > 0.0)) throw ConfigError("scenario.rate_hz must be > 0");
  if (!(s.mission_center.z() < 0.0)) {
    throw ConfigError("scenario.mission_center_z must be above ground (negative, NED)");
  }
  return s;
}

std::string FlightSummary::toText() const {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf),
                "mission_completed=%d waypoints=%d max_steady_state_error=%.4f "
                "fault_fallbacks=%d ticks=%llu duration=%.3fs\n",
                mission_completed ? 1 : 0, waypoints_completed,
                max_steady_state_error, fault_fallbacks,
                static_cast<unsigned long long>(ticks), duration_s);
  out += buf;
  for (const auto& leg : legs) {
    std::snprintf(buf, sizeof(buf),
                  "  leg %d: mean=%.4f max=%.4f steady_state=%.4f%s\n", leg.waypoint,
                  leg.mean_error, leg.max_error, leg.steady_state_error,
                  leg.timed_out ? " (timeout)" : "");
    out += buf;
  }
  for (const auto& ev : mode_timeline) {
    std::snprintf(buf, sizeof(buf), "  t=%.3f %s -> %s%s\n", ev.time_s,
                  flightModeName(ev.from), flightModeName(ev.to),
                  ev.fault_triggered ? " (fault)" : "");
    out += buf;
  }
  return out;
}

std::string FlightSummary::legsCsv() const {
  std::string out = "waypoint,mean_error,max_error,steady_state_error,timed_out\n";
  char buf[128];
  for (const auto& leg : legs) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%d\n", leg.waypoint,
                  leg.mean_error, leg.max_error, leg.steady_state_error,
                  leg.timed_out ? 1 : 0);
    out += buf;
  }
  return out;
}

namespace {

enum class Phase { kTakeoff, kStabilize, kMission, kLand, kDone };

constexpr double kAirborneAltitude = 0.15;  // m above ground
constexpr double kArriveRadius = 0.15;
constexpr double kArriveSpeed = 0.3;
constexpr double kStabilizeDwell = 1.0;  // s before engaging neural mode
constexpr double kLandedAltitudeBand = 0.05;
constexpr double kLandedSpeed = 0.1;
constexpr double kLandedDwell = 1.0;
constexpr double kCrashDescentSpeed = 0.8;  // m/s into the ground

struct Harness {
  const ScenarioConfig& scenario;
  const VehicleParams& params;
  CascadeController cascade;
  InferenceRuntime* runtime;

  TopicBus bus;
  RigidBodyState truth;
  std::array<double, 4> motor_estimate{};  // controller-side rotor model

  FlightMode mode = FlightMode::kDisarmed;
  Phase phase = Phase::kTakeoff;
  double phase_start_s = 0.0;
  double sim_time_s = 0.0;
  double dt = 0.0;
  bool armed_issued = false;
  std::optional<double> landed_since_s;
  std::optional<double> stabilized_since_s;

  MissionTracker mission;
  Eigen::Vector3d setpoint{0, 0, 0};
  RigidBodyState last_good;

  TelemetryLog telemetry;
  FlightSummary summary;
  bool crashed = false;
  std::string crash_reason;

  Harness(const ScenarioConfig& sc, const VehicleParams& vp, const CascadeGains& gains,
          InferenceRuntime* rt)
      : scenario(sc),
        params(vp),
        cascade(gains, vp),
        runtime(rt),
        mission(squareMission(sc.mission_center, sc.mission_side, sc.accept_radius,
                              sc.dwell_s, sc.leg_timeout_s)) {
    dt = 1.0 / sc.rate_hz;
    truth.position.setZero();
    last_good = truth;
  }

  bool airborne() const { return -truth.position.z() > kAirborneAltitude; }

  void switchMode(FlightCommand command, bool fault) {
    bool rejected = false;
    const FlightMode next = modeSwitch(mode, command, airborne(), fault, &rejected);
    if (next != mode) {
      summary.mode_timeline.push_back({sim_time_s, mode, next, fault});
      if (fault) ++summary.fault_fallbacks;
      mode = next;
    }
    if (command != FlightCommand::kNone) {
      TopicMessage cmd;
      cmd.topic = TopicId::kVehicleCommand;
      cmd.size = 1;
      cmd.data[0] = double(int(command));
      bus.publish(cmd);
    }
  }

  void scriptTick() {
    const Eigen::Vector3d takeoff_target = scenario.mission_center;
    switch (phase) {
      case Phase::kTakeoff: {
        if (!armed_issued) {
          switchMode(FlightCommand::kArm, false);
          armed_issued = true;
        }
        const double t = sim_time_s - phase_start_s;
        const double z = std::max(takeoff_target.z(), -scenario.takeoff_speed * t);
        setpoint = Eigen::Vector3d(takeoff_target.x(), takeoff_target.y(), z);
        const bool ramp_done = z <= takeoff_target.z();
        if (ramp_done && (truth.position - takeoff_target).norm() < kArriveRadius &&
            truth.velocity.norm() < kArriveSpeed) {
          phase = Phase::kStabilize;
          phase_start_s = sim_time_s;
        }
        break;
      }
      case Phase::kStabilize: {
        setpoint = takeoff_target;
        if (sim_time_s - phase_start_s >= kStabilizeDwell) {
          if (scenario.use_neural) {
            switchMode(FlightCommand::kEnterNeural, false);
          }
          phase = Phase::kMission;
          phase_start_s = sim_time_s;
        }
        break;
      }
      case Phase::kMission: {
        const MissionTracker::Tick tick = mission.tick(truth, sim_time_s);
        setpoint = tick.setpoint;
        if (tick.finished) {
          if (mode == FlightMode::kNeuralMode) {
            switchMode(FlightCommand::kEnterPosition, false);
          }
          phase = Phase::kLand;
          phase_start_s = sim_time_s;
        }
        break;
      }
      case Phase::kLand: {
        const double t = sim_time_s - phase_start_s;
        const double z = std::min(0.0, scenario.mission_center.z() +
                                           scenario.takeoff_speed * t);
        setpoint = Eigen::Vector3d(scenario.mission_center.x(),
                                   scenario.mission_center.y(), z);
        const bool near_ground = -truth.position.z() < kLandedAltitudeBand &&
                                 std::abs(truth.velocity.z()) < kLandedSpeed;
        if (near_ground) {
          if (!landed_since_s) landed_since_s = sim_time_s;
          if (sim_time_s - *landed_since_s >= kLandedDwell) {
            switchMode(FlightCommand::kDisarm, false);
            phase = Phase::kDone;
          }
        } else {
          landed_since_s.reset();
        }
        break;
      }
      case Phase::kDone:
        break;
    }

    TopicMessage sp;
    sp.topic = TopicId::kTrajectorySetpoint;
    sp.size = 3;
    sp.data = {setpoint.x(), setpoint.y(), setpoint.z()};
    bus.publish(sp);

    TopicMessage status;
    status.topic = TopicId::kFlightModeStatus;
    status.size = 1;
    status.data[0] = double(int(mode));
    bus.publish(status);
  }

  void advance(double step_dt) {
    scriptTick();

    std::array<double, 4> commanded{};
    if (mode != FlightMode::kDisarmed) {
      if (const auto motors = bus.readLatest(TopicId::kActuatorMotors)) {
        for (int i = 0; i < 4; ++i) {
          commanded[size_t(i)] = motors->message.data[size_t(i)] * params.omega_max;
        }
      }
    }
    try {
      truth = integrate(truth, commanded, step_dt, params);
    } catch (const SimulationDivergedError& e) {
      crashed = true;
      crash_reason = e.what();
    }
    sim_time_s += step_dt;
  }

  void publishState(uint64_t tick_index) {
    TopicMessage angvel;
    angvel.topic = TopicId::kVehicleAngularVelocity;
    angvel.size = 3;
    angvel.data = {truth.angular_velocity.x(), truth.angular_velocity.y(),
                   truth.angular_velocity.z()};

    TopicMessage att;
    att.topic = TopicId::kVehicleAttitude;
    att.size = 4;
    if (int64_t(tick_index) == scenario.fault_inject_tick) {
      const double nan = std::nan("");
      att.data = {nan, nan, nan, nan};
    } else {
      att.data = {truth.attitude.w(), truth.attitude.x(), truth.attitude.y(),
                  truth.attitude.z()};
    }

    TopicMessage pos;
    pos.topic = TopicId::kVehicleLocalPosition;
    pos.size = 6;
    pos.data = {truth.position.x(), truth.position.y(), truth.position.z(),
                truth.velocity.x(), truth.velocity.y(), truth.velocity.z()};

    bus.publish(angvel);
    bus.publish(att);
    bus.publish(pos);
  }

  /// Control law, scheduled as a callback on every angular-velocity publish.
  void onAngularVelocity(const TopicMessage& angvel) {
    const auto att = bus.readLatest(TopicId::kVehicleAttitude);
    const auto pos = bus.readLatest(TopicId::kVehicleLocalPosition);
    const auto sp = bus.readLatest(TopicId::kTrajectorySetpoint);
    if (!att || !pos || !sp) return;  // state topics not yet available

    // Controller-side rotor-speed estimate from its own published commands.
    std::array<double, 4> commanded{};
    if (mode != FlightMode::kDisarmed) {
      if (const auto motors = bus.readLatest(TopicId::kActuatorMotors)) {
        for (int i = 0; i < 4; ++i) {
          commanded[size_t(i)] = motors->message.data[size_t(i)] * params.omega_max;
        }
      }
    }
    for (int i = 0; i < 4; ++i) {
      motor_estimate[size_t(i)] =
          motorStep(motor_estimate[size_t(i)], commanded[size_t(i)], dt, params.motor_tau);
    }

    RigidBodyState observed;
    observed.position =
        Eigen::Vector3d(pos->message.data[0], pos->message.data[1], pos->message.data[2]);
    observed.velocity =
        Eigen::Vector3d(pos->message.data[3], pos->message.data[4], pos->message.data[5]);
    observed.attitude = Eigen::Quaterniond(att->message.data[0], att->message.data[1],
                                           att->message.data[2], att->message.data[3]);
    observed.angular_velocity =
        Eigen::Vector3d(angvel.data[0], angvel.data[1], angvel.data[2]);
    observed.motor_speed = motor_estimate;

    const Eigen::Vector3d setpoint_now(sp->message.data[0], sp->message.data[1],
                                       sp->message.data[2]);

    ControlOutput out;
    if (observed.isFinite()) {
      out = controllerTick(mode, observed, setpoint_now, dt, cascade, runtime);
      if (!out.fault) last_good = observed;
    } else if (mode == FlightMode::kNeuralMode) {
      out.fault = true;
    } else {
      out = controllerTick(mode, last_good, setpoint_now, dt, cascade, runtime);
    }

    if (out.fault) {
      // Fault fallback: switch immediately and fly this tick on the cascade
      // with the last good state.
      switchMode(FlightCommand::kNone, true);
      out = controllerTick(mode, last_good, setpoint_now, dt, cascade, runtime);
    }

    TopicMessage motors;
    motors.topic = TopicId::kActuatorMotors;
    motors.size = 4;
    for (int i = 0; i < 4; ++i) motors.data[size_t(i)] = out.motors[size_t(i)];
    bus.publish(motors);
  }

  bool onTickEnd(uint64_t tick) {
    TelemetryRow row;
    row.time_s = double(bus.nowUs()) * 1e-6;
    row.mode = mode;
    row.position = truth.position;
    row.setpoint = setpoint;
    row.velocity = truth.velocity;
    if (const auto motors = bus.readLatest(TopicId::kActuatorMotors)) {
      for (int i = 0; i < 4; ++i) row.motors[size_t(i)] = motors->message.data[size_t(i)];
    }
    telemetry.append(row);

    if (!crashed && airborne()) {
      if (upAlignment(truth) < 0.0) {
        crashed = true;
        crash_reason = "vehicle inverted";
      }
    }
    if (!crashed && truth.position.z() > 0.1 &&
        truth.velocity.z() > kCrashDescentSpeed) {
      crashed = true;
      crash_reason = "ground contact at speed";
    }
    if (crashed) return false;
    (void)tick;
    return phase != Phase::kDone;
  }
};

}  // namespace

FlightResult runFlight(const ScenarioConfig& scenario, const VehicleParams& params,
                       const CascadeGains& gains, InferenceRuntime* runtime,
                       TelemetryLog* failed_log) {
  if (scenario.use_neural && runtime == nullptr) {
    throw ConfigError("neural scenario requires a loaded model");
  }

  Harness harness(scenario, params, gains, scenario.use_neural ? runtime : nullptr);
  harness.bus.scheduleOn(TopicId::kVehicleAngularVelocity,
                         [&harness](const TopicMessage& msg) {
                           harness.onAngularVelocity(msg);
                         });

  uint64_t tick_counter = 0;
  const uint64_t ticks = runTicks(
      harness.bus, [&](double dt) { harness.advance(dt); }, scenario.rate_hz,
      scenario.max_duration_s,
      [&] { harness.publishState(tick_counter); },
      [&](uint64_t tick) {
        tick_counter = tick + 1;
        return harness.onTickEnd(tick);
      });

  if (harness.crashed) {
    if (failed_log) *failed_log = harness.telemetry;
    throw FlightError("flight failed: " + harness.crash_reason);
  }

  FlightResult result;
  result.summary = std::move(harness.summary);
  result.summary.mission_completed = harness.mission.finished();
  result.summary.waypoints_completed = int(harness.mission.legStats().size());
  result.summary.legs = harness.mission.legStats();
  result.summary.ticks = ticks;
  result.summary.duration_s = harness.sim_time_s;
  double max_ss = 0.0;
  for (const auto& leg : result.summary.legs) {
    max_ss = std::max(max_ss, leg.steady_state_error);
  }
  result.summary.max_steady_state_error = max_ss;
  result.telemetry = std::move(harness.telemetry);
  return result;
}

}  // namespace nnfc
