// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nnfc/cascade.hpp"
#include "nnfc/inference.hpp"
#include "nnfc/mission.hpp"
#include "nnfc/telemetry.hpp"
#include "nnfc/topic_bus.hpp"
#include "nnfc/vehicle.hpp"

namespace nnfc {

class KeyValueConfig;

enum class FlightCommand : int {
  kNone = 0,
  kArm = 1,
  kEnterPosition = 2,
  kEnterNeural = 3,
  kDisarm = 4,
};

/// Mode transition rules. A fault forces NeuralMode → PositionMode before any
/// command is considered. Illegal transitions are rejected (state unchanged)
/// and logged through `rejected` when provided.
FlightMode modeSwitch(FlightMode current, FlightCommand command, bool airborne,
                      bool fault, bool* rejected = nullptr);

struct ControlOutput {
  std::array<double, 4> motors{};
  bool fault = false;
};

/// One control-law evaluation. PositionMode runs the full cascade;
/// NeuralMode runs preprocess → infer → postprocess and keeps the cascade
/// integrators reset so fallback re-engages cleanly; Disarmed outputs zeros.
/// A fault (non-finite observation or inference output) sets the flag and
/// leaves the motors zeroed; the caller handles the fallback.
ControlOutput controllerTick(FlightMode mode, const RigidBodyState& state,
                             const Eigen::Vector3d& setpoint, double dt,
                             CascadeController& cascade, InferenceRuntime* runtime);

/// Scripted-flight description. Loaded from a key-value scenario file.
struct ScenarioConfig {
  bool use_neural = true;
  std::string model_path;
  uint64_t seed = 7;
  double rate_hz = 650.0;
  double takeoff_speed = 0.5;  // m/s setpoint ramp, also used for landing
  Eigen::Vector3d mission_center{0.0, 0.0, -1.5};
  double mission_side = 2.0;
  double accept_radius = 0.15;
  double dwell_s = 1.0;
  double leg_timeout_s = 10.0;
  double max_duration_s = 120.0;
  size_t budget_bytes = kDefaultBudgetBytes;
  /// Tick at which the published attitude is corrupted to NaN for one tick
  /// (fault-injection experiments); -1 disables.
  int64_t fault_inject_tick = -1;

  static ScenarioConfig fromConfig(const KeyValueConfig& cfg);
};

struct ModeEvent {
  double time_s = 0.0;
  FlightMode from = FlightMode::kDisarmed;
  FlightMode to = FlightMode::kDisarmed;
  bool fault_triggered = false;
};

struct FlightSummary {
  bool mission_completed = false;
  int waypoints_completed = 0;
  std::vector<MissionTracker::LegStats> legs;
  double max_steady_state_error = 0.0;
  int fault_fallbacks = 0;
  std::vector<ModeEvent> mode_timeline;
  uint64_t ticks = 0;
  double duration_s = 0.0;

  std::string toText() const;
  std::string legsCsv() const;
};

struct FlightResult {
  TelemetryLog telemetry;
  FlightSummary summary;
};

/// Scripted sequence: arm → takeoff in PositionMode → switch to NeuralMode →
/// square mission → back to PositionMode → land → disarm, executed on the
/// topic bus at scenario.rate_hz in virtual time. The controller runs as a
/// callback on every angular-velocity publication. Throws FlightError when
/// the crash predicate fires; the telemetry accumulated so far is attached to
/// the error by writing it through `failed_log` when provided.
FlightResult runFlight(const ScenarioConfig& scenario, const VehicleParams& params,
                       const CascadeGains& gains,
                       InferenceRuntime* runtime = nullptr,
                       TelemetryLog* failed_log = nullptr);

}  // namespace nnfc
