// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria 6-8 share one training run, so the full suite
// runs in roughly the training budget.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nnfc/cascade.hpp"
#include "nnfc/errors.hpp"
#include "nnfc/flight_stack.hpp"
#include "nnfc/gae.hpp"
#include "nnfc/inference.hpp"
#include "nnfc/keyvalue_config.hpp"
#include "nnfc/mlp.hpp"
#include "nnfc/modelpack.hpp"
#include "nnfc/rng.hpp"
#include "nnfc/training.hpp"

using namespace nnfc;

namespace {

const std::string kRepo = NNFC_REPO_DIR;

int g_failures = 0;

void report(int id, const char* name, bool passed, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", passed ? "PASS" : "FAIL", id, name,
              detail.c_str());
  std::fflush(stdout);
  if (!passed) ++g_failures;
}

void runCriterion(int id, const char* name,
                  const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [passed, detail] = body();
    report(id, name, passed, detail);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

GaussianTanhPolicy canonicalPolicy(uint64_t seed) {
  GaussianTanhPolicy policy;
  Rng rng(seed);
  policy.initWeights(rng);
  for (auto& w : policy.net().layer(2).weights) w = float(rng.uniform(-0.5, 0.5));
  return policy;
}

struct Shared {
  VehicleParams params;
  CascadeGains gains;
  RewardWeights weights;
  PpoConfig ppo;
  std::optional<TrainResult> trained;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---- criterion bodies ------------------------------------------------------

std::pair<bool, std::string> memoryBudget() {
  const std::vector<uint8_t> bytes = exportPolicy(canonicalPolicy(1));
  const ModelPackInfo info = parseModelPack(bytes);
  const bool ok = bytes.size() == 13000 && info.required_arena_bytes == 512 &&
                  info.footprintBytes() == 13512 && info.footprintBytes() < 50000;
  return {ok, fmt("pack %zu bytes (want 13000), footprint %zu bytes (want 13512) "
                  "< 50000",
                  bytes.size(), info.footprintBytes())};
}

std::pair<bool, std::string> loopRateBudget() {
  InferenceRuntime runtime(exportPolicy(canonicalPolicy(2)));
  const LatencyReport r = runtime.bench(100000, 42);
  const bool ok = r.total.p99_us < kTickBudgetUs;
  return {ok, fmt("p99 preprocess+infer+postprocess %.2f us < %.2f us over 1e5 "
                  "iterations (M7 reference 93.4/137.6 us, not reproduced)",
                  r.total.p99_us, kTickBudgetUs)};
}

std::pair<bool, std::string> conversionParity() {
  const GaussianTanhPolicy policy = canonicalPolicy(3);
  const std::vector<uint8_t> bytes = exportPolicy(policy);
  const std::vector<uint8_t> again =
      exportNetwork(netFromModelPack(bytes), kPolicyMagic);
  const bool roundtrip = bytes == again;

  InferenceRuntime runtime{std::vector<uint8_t>(bytes)};
  Rng rng(33);
  float max_diff = 0.0f;
  Observation obs;
  ActionVec action;
  for (int i = 0; i < 10000; ++i) {
    for (auto& v : obs) v = float(rng.uniform(-3, 3));
    runtime.infer(obs, action);
    const ActionVec ref = policy.deterministicAction(obs);
    for (int k = 0; k < 4; ++k) {
      max_diff = std::max(max_diff, std::abs(action[size_t(k)] - ref[size_t(k)]));
    }
  }
  const bool ok = roundtrip && max_diff <= 1e-5f;
  return {ok, fmt("round-trip byte-identical: %s, parity max |diff| %.2e <= 1e-5 "
                  "over 1e4 observations",
                  roundtrip ? "yes" : "NO", double(max_diff))};
}

std::pair<bool, std::string> numericsOracles() {
  // CRC-32 check value
  const bool crc_ok = crc32(std::string("123456789")) == 0xCBF43926u;

  // gradients vs central differences on 20 random small nets
  Rng rng(44);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int in = 2 + int(rng.uniformInt(7));
    const int mid = 2 + int(rng.uniformInt(7));
    const int out = 1 + int(rng.uniformInt(4));
    Mlp<double> net;
    net.addLayer(in, mid, rng.uniform() < 0.5 ? Activation::kTanh : Activation::kRelu);
    net.addLayer(mid, out, Activation::kLinear);
    for (size_t li = 0; li < net.numLayers(); ++li) {
      for (auto& w : net.layer(li).weights) w = rng.uniform(-0.7, 0.7);
      for (auto& b : net.layer(li).bias) b = rng.uniform(-0.7, 0.7);
    }
    std::vector<double> x(static_cast<size_t>(in));
    for (auto& v : x) v = rng.uniform(-1.2, 1.2);
    std::vector<double> coeff(static_cast<size_t>(out));
    for (auto& v : coeff) v = rng.uniform(-1, 1);

    Mlp<double>::Cache cache;
    net.forward(x, cache);
    std::vector<double> analytic(net.paramCount(), 0.0);
    net.backward(cache, coeff, analytic);

    bool near_kink = false;
    for (size_t li = 0; li < net.numLayers(); ++li) {
      if (net.layer(li).activation != Activation::kRelu) continue;
      for (double z : cache.pre_act[li]) {
        if (std::abs(z) < 1e-4) near_kink = true;
      }
    }
    if (near_kink) continue;

    const double h = 1e-5;
    std::vector<double> flat(net.paramCount());
    net.flattenParams(flat);
    for (size_t pi = 0; pi < flat.size(); ++pi) {
      std::vector<double> bumped = flat;
      bumped[pi] = flat[pi] + h;
      net.unflattenParams(bumped);
      double up = 0.0;
      {
        const auto y = net.forward(x);
        for (size_t k = 0; k < y.size(); ++k) up += coeff[k] * y[k];
      }
      bumped[pi] = flat[pi] - h;
      net.unflattenParams(bumped);
      double down = 0.0;
      {
        const auto y = net.forward(x);
        for (size_t k = 0; k < y.size(); ++k) down += coeff[k] * y[k];
      }
      net.unflattenParams(flat);
      const double numeric = (up - down) / (2.0 * h);
      const double rel = std::abs(analytic[pi] - numeric) /
                         std::max({std::abs(numeric), std::abs(analytic[pi]), 1e-8});
      worst_rel = std::max(worst_rel, rel);
    }
  }
  const bool grad_ok = worst_rel < 1e-4;

  // GAE vs brute force
  double worst_gae = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 50;
    std::vector<float> rewards(n), values(n);
    std::vector<uint8_t> dones(n, 0);
    for (auto& r : rewards) r = float(rng.uniform(-2, 2));
    for (auto& v : values) v = float(rng.uniform(-2, 2));
    for (auto& d : dones) d = rng.uniform() < 0.1 ? 1 : 0;
    const float bootstrap = float(rng.uniform(-2, 2));
    const GaeResult got = gae(rewards, values, bootstrap, dones, 0.99, 0.95);
    for (size_t t = 0; t < n; ++t) {
      double sum = 0.0;
      double coeff = 1.0;
      for (size_t l = t; l < n; ++l) {
        const double next_v = (l + 1 < n) ? double(values[l + 1]) : double(bootstrap);
        const double delta = double(rewards[l]) +
                             0.99 * next_v * (dones[l] ? 0.0 : 1.0) -
                             double(values[l]);
        sum += coeff * delta;
        if (dones[l]) break;
        coeff *= 0.99 * 0.95;
      }
      worst_gae = std::max(worst_gae, std::abs(got.advantages[t] - sum));
    }
  }
  const bool gae_ok = worst_gae <= 1e-9;

  const bool ok = crc_ok && grad_ok && gae_ok;
  return {ok, fmt("crc(123456789)=%s, grad rel err %.2e < 1e-4, gae vs brute force "
                  "%.2e <= 1e-9",
                  crc_ok ? "0xCBF43926" : "WRONG", worst_rel, worst_gae)};
}

std::pair<bool, std::string> dynamicsOracles(const Shared& shared) {
  const VehicleParams& p = shared.params;

  // free fall closed form
  RigidBodyState s;
  const double dt = 1e-4;
  const double t_end = 200.0;
  for (int i = 0; i < int(t_end / dt); ++i) s = integrate(s, {0, 0, 0, 0}, dt, p);
  const double expected = 0.5 * p.gravity * t_end * t_end;
  const double rel = std::abs(s.position.z() - expected) / expected;
  const bool fall_ok = rel <= 1e-6;

  // hover force balance
  const double hover = p.hoverSpeed();
  RigidBodyState h;
  h.position = Eigen::Vector3d(0, 0, -1.5);
  h.motor_speed.fill(hover);
  double worst_step = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const RigidBodyState next = integrate(h, {hover, hover, hover, hover}, 0.01, p);
    worst_step = std::max(worst_step, (next.position - h.position).cwiseAbs().maxCoeff());
    h = next;
  }
  const bool hover_ok = worst_step <= 1e-12;

  // quaternion norm over 1e6 random steps
  Rng rng(55);
  RigidBodyState q;
  q.motor_speed.fill(hover);
  double worst_norm = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    std::array<double, 4> cmd;
    for (auto& c : cmd) c = rng.uniform(0.0, p.omega_max);
    q = integrate(q, cmd, 0.002, p);
    worst_norm = std::max(worst_norm, std::abs(q.attitude.norm() - 1.0));
    if ((i & 8191) == 0) {
      q.position.setZero();
      q.velocity.setZero();
    }
  }
  const bool quat_ok = worst_norm <= 1e-9;

  const bool ok = fall_ok && hover_ok && quat_ok;
  return {ok, fmt("free-fall rel err %.2e <= 1e-6 (dt=1e-4), hover drift %.2e <= "
                  "1e-12/step, quaternion drift %.2e <= 1e-9 over 1e6 steps",
                  rel, worst_step, worst_norm)};
}

std::pair<bool, std::string> trainingSuccess(Shared& shared) {
  TrainResult result = train(shared.params, shared.weights, shared.ppo,
                             [](int update, const UpdateStats&, const CollectStats& c) {
                               if (update % 100 == 0) {
                                 std::printf("  [train] update %d reward %.2f "
                                             "final_err %.3f\n",
                                             update, c.mean_episode_reward,
                                             c.mean_final_pos_error);
                                 std::fflush(stdout);
                               }
                             });
  const bool ok = result.best_eval_error < 0.15f &&
                  result.updates_run <= shared.ppo.total_updates;
  const std::string detail =
      fmt("mean final-100-step error %.4f m < 0.15 m over %d eval episodes after "
          "%d/%d updates",
          double(result.best_eval_error), shared.ppo.eval_episodes,
          result.updates_run, shared.ppo.total_updates);
  shared.trained = std::move(result);
  return {ok, detail};
}

std::pair<bool, std::string> missionTracking(Shared& shared) {
  if (!shared.trained) return {false, "no trained policy (criterion 6 ran first?)"};

  InferenceRuntime runtime(exportPolicy(shared.trained->policy));

  ScenarioConfig neural = ScenarioConfig::fromConfig(
      KeyValueConfig::fromFile(kRepo + "/config/scenario_square_neural.cfg"));
  const FlightResult nres = runFlight(neural, shared.params, shared.gains, &runtime);

  ScenarioConfig classical = ScenarioConfig::fromConfig(
      KeyValueConfig::fromFile(kRepo + "/config/scenario_square_classical.cfg"));
  const FlightResult cres = runFlight(classical, shared.params, shared.gains);

  const bool neural_ok = nres.summary.mission_completed &&
                         nres.summary.waypoints_completed == 6 &&
                         nres.summary.fault_fallbacks == 0 &&
                         nres.summary.max_steady_state_error < 0.3;
  const bool classical_ok = cres.summary.mission_completed &&
                            cres.summary.fault_fallbacks == 0 &&
                            cres.summary.max_steady_state_error < 0.3;
  return {neural_ok && classical_ok,
          fmt("neural: %d waypoints, steady-state max %.3f m, %d fallbacks; "
              "classical baseline: %.3f m",
              nres.summary.waypoints_completed, nres.summary.max_steady_state_error,
              nres.summary.fault_fallbacks, cres.summary.max_steady_state_error)};
}

std::pair<bool, std::string> safetyFallback(Shared& shared) {
  if (!shared.trained) return {false, "no trained policy (criterion 6 ran first?)"};

  InferenceRuntime runtime(exportPolicy(shared.trained->policy));
  const ScenarioConfig base = ScenarioConfig::fromConfig(
      KeyValueConfig::fromFile(kRepo + "/config/scenario_square_neural.cfg"));

  // locate the neural window on a clean flight
  const FlightResult clean = runFlight(base, shared.params, shared.gains, &runtime);
  int64_t neural_start = -1;
  int64_t neural_end = -1;
  const auto& rows = clean.telemetry.rows();
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].mode == FlightMode::kNeuralMode) {
      if (neural_start < 0) neural_start = int64_t(i);
      neural_end = int64_t(i);
    }
  }
  if (neural_start < 0) return {false, "clean flight never entered neural mode"};
  const int64_t margin = int64_t(3.5 * base.rate_hz);
  const int64_t lo = neural_start + 10;
  const int64_t hi = neural_end - margin;
  if (hi <= lo) return {false, "neural window too short for injections"};

  Rng rng(1234);
  int switched = 0;
  int restabilized = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    ScenarioConfig scenario = base;
    scenario.fault_inject_tick = lo + int64_t(rng.uniformInt(uint64_t(hi - lo)));
    const FlightResult res = runFlight(scenario, shared.params, shared.gains, &runtime);
    const auto& frows = res.telemetry.rows();
    const size_t k = size_t(scenario.fault_inject_tick);
    if (res.summary.fault_fallbacks >= 1 && k + 1 < frows.size() &&
        frows[k].mode == FlightMode::kNeuralMode &&
        frows[k + 1].mode == FlightMode::kPositionMode) {
      ++switched;
    } else {
      continue;
    }
    const size_t window_end = std::min(frows.size(), k + 1 + size_t(3 * 650));
    for (size_t i = k + 1; i < window_end; ++i) {
      if ((frows[i].position - frows[i].setpoint).norm() < 0.3) {
        ++restabilized;
        break;
      }
    }
  }
  const bool ok = switched == trials && restabilized >= 95;
  return {ok, fmt("%d/100 switched within one tick, %d/100 re-stabilized < 0.3 m "
                  "within 3 s (need 100 and >= 95)",
                  switched, restabilized)};
}

std::pair<bool, std::string> determinism(Shared& shared) {
  // training checkpoints: two smoke runs, identical bytes
  PpoConfig smoke = shared.ppo;
  smoke.total_updates = 2;
  smoke.eval_every = 0;
  smoke.eval_episodes = 4;
  smoke.target_eval_error = 0.0f;
  const TrainResult a = train(shared.params, shared.weights, smoke);
  const TrainResult b = train(shared.params, shared.weights, smoke);
  const bool train_ok = exportPolicy(a.policy) == exportPolicy(b.policy) &&
                        a.params_crc == b.params_crc;

  // flight telemetry: identical CSV bytes (classical and neural)
  const ScenarioConfig classical = ScenarioConfig::fromConfig(
      KeyValueConfig::fromFile(kRepo + "/config/scenario_square_classical.cfg"));
  const std::string c1 =
      runFlight(classical, shared.params, shared.gains).telemetry.toCsv();
  const std::string c2 =
      runFlight(classical, shared.params, shared.gains).telemetry.toCsv();
  bool fly_ok = c1 == c2;

  if (shared.trained) {
    InferenceRuntime r1(exportPolicy(shared.trained->policy));
    InferenceRuntime r2(exportPolicy(shared.trained->policy));
    const ScenarioConfig neural = ScenarioConfig::fromConfig(
        KeyValueConfig::fromFile(kRepo + "/config/scenario_square_neural.cfg"));
    const std::string n1 =
        runFlight(neural, shared.params, shared.gains, &r1).telemetry.toCsv();
    const std::string n2 =
        runFlight(neural, shared.params, shared.gains, &r2).telemetry.toCsv();
    fly_ok = fly_ok && n1 == n2;
  }

  return {train_ok && fly_ok,
          fmt("checkpoint bytes identical: %s, telemetry bytes identical: %s",
              train_ok ? "yes" : "NO", fly_ok ? "yes" : "NO")};
}

}  // namespace

int main() {
  std::printf("nnfc acceptance suite\n");

  Shared shared;
  {
    const KeyValueConfig cfg =
        KeyValueConfig::fromFile(kRepo + "/config/vehicle.cfg");
    shared.params = VehicleParams::fromConfig(cfg);
    shared.gains = CascadeGains::fromConfig(cfg);
    shared.weights = RewardWeights::fromConfig(cfg);
    shared.ppo = PpoConfig::fromConfig(cfg);
  }

  runCriterion(1, "memory budget", memoryBudget);
  runCriterion(2, "loop-rate budget", loopRateBudget);
  runCriterion(3, "conversion parity", conversionParity);
  runCriterion(4, "numerics oracles", numericsOracles);
  runCriterion(5, "dynamics oracles", [&] { return dynamicsOracles(shared); });
  runCriterion(6, "training success", [&] { return trainingSuccess(shared); });
  runCriterion(7, "mission tracking", [&] { return missionTracking(shared); });
  runCriterion(8, "safety fallback", [&] { return safetyFallback(shared); });
  runCriterion(9, "determinism", [&] { return determinism(shared); });

  std::printf("%d of 9 criteria passed\n", 9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
