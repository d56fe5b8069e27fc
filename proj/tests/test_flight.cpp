// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>

#include "doctest.h"
#include "nnfc/errors.hpp"
#include "nnfc/flight_stack.hpp"
#include "nnfc/keyvalue_config.hpp"
#include "nnfc/modelpack.hpp"
#include "nnfc/rng.hpp"

using namespace nnfc;

namespace {

const std::string kRepo = NNFC_REPO_DIR;

struct Setup {
  VehicleParams params;
  CascadeGains gains;
};

Setup loadSetup() {
  const KeyValueConfig cfg = KeyValueConfig::fromFile(kRepo + "/config/vehicle.cfg");
  return {VehicleParams::fromConfig(cfg), CascadeGains::fromConfig(cfg)};
}

ScenarioConfig classicalScenario() {
  const KeyValueConfig cfg =
      KeyValueConfig::fromFile(kRepo + "/config/scenario_square_classical.cfg");
  return ScenarioConfig::fromConfig(cfg);
}

ScenarioConfig neuralScenario() {
  const KeyValueConfig cfg =
      KeyValueConfig::fromFile(kRepo + "/config/scenario_square_neural.cfg");
  return ScenarioConfig::fromConfig(cfg);
}

GaussianTanhPolicy randomPolicy(uint64_t seed) {
  GaussianTanhPolicy policy;
  Rng rng(seed);
  policy.initWeights(rng);
  for (auto& w : policy.net().layer(2).weights) w = float(rng.uniform(-0.5, 0.5));
  return policy;
}

}  // namespace

TEST_CASE("controller tick: neural path is exactly the runtime composition") {
  const Setup setup = loadSetup();
  const GaussianTanhPolicy policy = randomPolicy(91);
  InferenceRuntime runtime(exportPolicy(policy));
  CascadeController cascade(setup.gains, setup.params);

  RigidBodyState s;
  s.position = Eigen::Vector3d(0.3, -0.4, -1.2);
  s.velocity = Eigen::Vector3d(0.1, 0.0, -0.05);
  s.motor_speed.fill(setup.params.hoverSpeed());
  const Eigen::Vector3d sp(0, 0, -1.5);

  const ControlOutput out = controllerTick(FlightMode::kNeuralMode, s, sp, 1.0 / 650.0,
                                           cascade, &runtime);
  REQUIRE_FALSE(out.fault);

  Observation obs;
  REQUIRE(runtime.preprocess(s.position, s.velocity, s.attitude, s.angular_velocity,
                             sp, obs));
  ActionVec action;
  REQUIRE(runtime.infer(obs, action));
  CHECK(out.motors == InferenceRuntime::postprocess(action));
}

TEST_CASE("controller tick: position mode at hover equilibrium") {
  const Setup setup = loadSetup();
  CascadeController cascade(setup.gains, setup.params);

  RigidBodyState s;
  s.position = Eigen::Vector3d(0, 0, -1.5);
  s.motor_speed.fill(setup.params.hoverSpeed());

  const ControlOutput out = controllerTick(FlightMode::kPositionMode, s, s.position,
                                           1.0 / 650.0, cascade, nullptr);
  for (double m : out.motors) {
    CHECK(m == doctest::Approx(setup.gains.hover_throttle).epsilon(0.03));
    CHECK(std::abs(m - setup.gains.hover_throttle) < 0.02);
  }
}

TEST_CASE("controller tick: disarmed outputs zeros; neural faults on NaN state") {
  const Setup setup = loadSetup();
  const GaussianTanhPolicy policy = randomPolicy(92);
  InferenceRuntime runtime(exportPolicy(policy));
  CascadeController cascade(setup.gains, setup.params);

  RigidBodyState s;
  const ControlOutput idle =
      controllerTick(FlightMode::kDisarmed, s, {0, 0, 0}, 1e-3, cascade, &runtime);
  CHECK(idle.motors == std::array<double, 4>{0, 0, 0, 0});

  s.attitude = Eigen::Quaterniond(std::nan(""), 0, 0, 0);
  const ControlOutput faulted =
      controllerTick(FlightMode::kNeuralMode, s, {0, 0, 0}, 1e-3, cascade, &runtime);
  CHECK(faulted.fault);
}

TEST_CASE("classical square mission completes within the tracking bar") {
  const Setup setup = loadSetup();
  const FlightResult result =
      runFlight(classicalScenario(), setup.params, setup.gains);

  CHECK(result.summary.mission_completed);
  CHECK(result.summary.waypoints_completed == 6);
  CHECK(result.summary.fault_fallbacks == 0);
  CHECK(result.summary.max_steady_state_error < 0.3);
  CHECK(result.telemetry.size() == result.summary.ticks);

  // the flight ends disarmed on the ground
  const TelemetryRow& last = result.telemetry.rows().back();
  CHECK(last.mode == FlightMode::kDisarmed);
  CHECK(-last.position.z() < 0.1);
}

TEST_CASE("classical flight telemetry is byte-identical across runs") {
  const Setup setup = loadSetup();
  const FlightResult a = runFlight(classicalScenario(), setup.params, setup.gains);
  const FlightResult b = runFlight(classicalScenario(), setup.params, setup.gains);
  CHECK(a.telemetry.toCsv() == b.telemetry.toCsv());
}

TEST_CASE("neural square mission with the shipped checkpoint") {
  const std::string model_path = kRepo + "/models/policy.nnfc";
  REQUIRE_MESSAGE(std::filesystem::exists(model_path),
                  "trained checkpoint missing; run `nnfc train` and commit it");
  const Setup setup = loadSetup();
  InferenceRuntime runtime = InferenceRuntime::fromFile(model_path);

  const FlightResult result =
      runFlight(neuralScenario(), setup.params, setup.gains, &runtime);

  CHECK(result.summary.mission_completed);
  CHECK(result.summary.waypoints_completed == 6);
  CHECK(result.summary.fault_fallbacks == 0);
  CHECK(result.summary.max_steady_state_error < 0.3);

  // motor commands stay in [0,1] whenever the neural mode is engaged
  for (const TelemetryRow& row : result.telemetry.rows()) {
    if (row.mode == FlightMode::kNeuralMode) {
      for (double m : row.motors) {
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
      }
    }
  }

  // the mode timeline holds a neural window
  bool entered = false;
  for (const auto& ev : result.summary.mode_timeline) {
    if (ev.to == FlightMode::kNeuralMode) entered = true;
  }
  CHECK(entered);
}

TEST_CASE("fault injection falls back within one tick and re-stabilizes") {
  const std::string model_path = kRepo + "/models/policy.nnfc";
  REQUIRE_MESSAGE(std::filesystem::exists(model_path),
                  "trained checkpoint missing; run `nnfc train` and commit it");
  const Setup setup = loadSetup();
  InferenceRuntime runtime = InferenceRuntime::fromFile(model_path);

  // find the neural window from a clean run
  const FlightResult clean =
      runFlight(neuralScenario(), setup.params, setup.gains, &runtime);
  int64_t neural_start = -1;
  int64_t neural_end = -1;
  const auto& rows = clean.telemetry.rows();
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].mode == FlightMode::kNeuralMode) {
      if (neural_start < 0) neural_start = int64_t(i);
      neural_end = int64_t(i);
    }
  }
  REQUIRE(neural_start >= 0);
  REQUIRE(neural_end > neural_start + 1300);

  ScenarioConfig scenario = neuralScenario();
  // injected state is read by the controller one tick later; keep 3 s of
  // margin before the window ends
  scenario.fault_inject_tick = neural_start + (neural_end - neural_start) / 2;

  const FlightResult faulted =
      runFlight(scenario, setup.params, setup.gains, &runtime);
  CHECK(faulted.summary.fault_fallbacks == 1);

  const auto& frows = faulted.telemetry.rows();
  const size_t k = size_t(scenario.fault_inject_tick);
  REQUIRE(frows.size() > k + 3 * 650);
  CHECK(frows[k].mode == FlightMode::kNeuralMode);
  CHECK(frows[k + 1].mode == FlightMode::kPositionMode);

  // re-stabilizes to < 0.3 m of the active setpoint within 3 s
  bool restabilized = false;
  for (size_t i = k + 1; i < std::min(frows.size(), k + 1 + size_t(3 * 650)); ++i) {
    if ((frows[i].position - frows[i].setpoint).norm() < 0.3) {
      restabilized = true;
      break;
    }
  }
  CHECK(restabilized);
}

TEST_CASE("a neural scenario without a model is a config error") {
  const Setup setup = loadSetup();
  CHECK_THROWS_AS(runFlight(neuralScenario(), setup.params, setup.gains, nullptr),
                  ConfigError);
}
