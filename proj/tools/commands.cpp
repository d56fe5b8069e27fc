// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "manifest.hpp"
#include "nnfc/errors.hpp"
#include "nnfc/flight_stack.hpp"
#include "nnfc/inference.hpp"
#include "nnfc/keyvalue_config.hpp"
#include "nnfc/modelpack.hpp"
#include "nnfc/telemetry.hpp"
#include "nnfc/training.hpp"
#include "nnfc/version.hpp"
#include "svg_plot.hpp"

namespace nnfc {

namespace {

void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << text;
}

plot::Series makeSeries(const CsvTable& t, const std::string& x_col,
                        const std::string& y_col, const std::string& label,
                        const std::string& color, bool dashed = false) {
  plot::Series s;
  s.label = label;
  s.color = color;
  s.dashed = dashed;
  s.x = t.columns[t.column(x_col)];
  s.y = t.columns[t.column(y_col)];
  return s;
}

}  // namespace

int cmdSysid(const std::string& config_path) {
  KeyValueConfig cfg = KeyValueConfig::fromFile(config_path);
  const double mass = cfg.getDouble("vehicle.mass");
  const double hover_speed = cfg.getDouble("vehicle.hover_speed");
  const double gravity = cfg.getDouble("vehicle.gravity", 9.81);
  const double omega_max = cfg.getDouble("vehicle.omega_max");

  const double k_thrust = computeThrustCoefficient(mass, hover_speed, gravity);
  cfg.setDouble("vehicle.k_thrust", k_thrust);
  cfg.setDouble("gains.hover_throttle", hover_speed / omega_max);
  cfg.writeFile(config_path);

  const double lift = 4.0 * k_thrust * hover_speed * hover_speed;
  std::printf("k_thrust = %s N s^2/rad^2\n", formatConfigDouble(k_thrust).c_str());
  std::printf("hover_throttle = %s\n",
              formatConfigDouble(hover_speed / omega_max).c_str());
  std::printf("balance check: 4 k w_h^2 = %.9g N vs m g = %.9g N\n", lift,
              mass * gravity);
  return 0;
}

int cmdTrain(const std::string& config_path, std::optional<uint64_t> seed,
             const std::string& out_dir) {
  const KeyValueConfig cfg = KeyValueConfig::fromFile(config_path);
  const VehicleParams params = VehicleParams::fromConfig(cfg);
  const RewardWeights weights = RewardWeights::fromConfig(cfg);
  PpoConfig ppo = PpoConfig::fromConfig(cfg);
  if (seed) ppo.seed = *seed;

  RunManifest manifest;
  manifest.command = "train";
  manifest.config_paths = {config_path};
  manifest.seed = ppo.seed;
  manifest.out_dir = out_dir;
  manifest.tool_version = kVersion;
  manifest.addChecksum(config_path);
  manifest.write();

  const TrainResult result =
      train(params, weights, ppo,
            [](int update, const UpdateStats& stats, const CollectStats& collect) {
              if (update % 10 == 0 || update == 1) {
                std::printf(
                    "update %4d  reward %8.3f  final_err %6.3f  pg %7.4f  "
                    "vloss %8.3f  kl %.4f  clip %.3f\n",
                    update, collect.mean_episode_reward, collect.mean_final_pos_error,
                    stats.policy_loss, stats.value_loss, stats.approx_kl,
                    stats.clip_fraction);
                std::fflush(stdout);
              }
            });

  writeText(out_dir + "/curves.csv", result.curves_csv);
  const std::vector<uint8_t> policy_bytes = exportPolicy(result.policy);
  writeBinaryFile(out_dir + "/policy.nnfc", policy_bytes);
  writeBinaryFile(out_dir + "/policy_critic.nnfc", exportCritic(result.critic));

  std::printf("best eval position error: %.4f m after %d updates\n",
              result.best_eval_error, result.updates_run);
  std::printf("checkpoint: %s/policy.nnfc (%zu bytes, crc %08x)\n", out_dir.c_str(),
              policy_bytes.size(), crc32(policy_bytes));
  return 0;
}

int cmdFly(const std::string& config_path, const std::string& scenario_path,
           const std::string& model_override, std::optional<uint64_t> seed,
           const std::string& out_dir, std::optional<size_t> budget_bytes) {
  const KeyValueConfig cfg = KeyValueConfig::fromFile(config_path);
  const VehicleParams params = VehicleParams::fromConfig(cfg);
  const CascadeGains gains = CascadeGains::fromConfig(cfg);

  const KeyValueConfig scenario_cfg = KeyValueConfig::fromFile(scenario_path);
  ScenarioConfig scenario = ScenarioConfig::fromConfig(scenario_cfg);
  if (!model_override.empty()) scenario.model_path = model_override;
  if (seed) scenario.seed = *seed;
  if (budget_bytes) scenario.budget_bytes = *budget_bytes;

  RunManifest manifest;
  manifest.command = "fly";
  manifest.config_paths = {config_path, scenario_path};
  manifest.seed = scenario.seed;
  manifest.out_dir = out_dir;
  manifest.tool_version = kVersion;
  manifest.addChecksum(config_path);
  manifest.addChecksum(scenario_path);

  std::optional<InferenceRuntime> runtime;
  if (scenario.use_neural) {
    if (scenario.model_path.empty()) {
      throw ConfigError("neural scenario needs a model (--model or scenario.model)");
    }
    runtime.emplace(InferenceRuntime::fromFile(scenario.model_path,
                                               scenario.budget_bytes));
    manifest.addChecksum(scenario.model_path);
  }
  manifest.write();

  TelemetryLog failed_log;
  try {
    const FlightResult result = runFlight(scenario, params, gains,
                                          runtime ? &*runtime : nullptr, &failed_log);
    result.telemetry.writeCsv(out_dir + "/telemetry.csv");
    writeText(out_dir + "/legs.csv", result.summary.legsCsv());
    writeText(out_dir + "/summary.txt", result.summary.toText());
    std::fputs(result.summary.toText().c_str(), stdout);
    if (!result.summary.mission_completed) {
      throw FlightError("mission did not complete all waypoints");
    }
  } catch (const FlightError&) {
    if (failed_log.size() > 0) {
      failed_log.writeCsv(out_dir + "/telemetry.csv");
    }
    throw;
  }
  return 0;
}

int cmdBench(const std::string& model_path, int iterations, size_t budget_bytes,
             const std::string& out_dir) {
  InferenceRuntime runtime = InferenceRuntime::fromFile(model_path, budget_bytes);

  if (!out_dir.empty()) {
    RunManifest manifest;
    manifest.command = "bench";
    manifest.config_paths = {model_path};
    manifest.out_dir = out_dir;
    manifest.tool_version = kVersion;
    manifest.addChecksum(model_path);
    manifest.write();
  }

  const LatencyReport report = runtime.bench(iterations);
  std::printf("model: %s\n", model_path.c_str());
  std::printf("footprint: %zu / %zu bytes (file %zu + arena %zu)\n",
              runtime.footprintBytes(), budget_bytes, runtime.model().file_size,
              runtime.arenaBytes());
  std::printf("iterations: %d (first 100 warm-up excluded)\n", iterations);
  std::fputs(report.toTable().c_str(), stdout);

  if (!out_dir.empty()) {
    writeText(out_dir + "/latency.csv", report.toCsv());
  }
  return 0;
}

int cmdReport(const std::vector<std::string>& telemetry_paths,
              const std::string& out_dir) {
  if (telemetry_paths.empty() || telemetry_paths.size() > 2) {
    throw ConfigError("report takes one or two telemetry CSV files");
  }

  RunManifest manifest;
  manifest.command = "report";
  manifest.config_paths = telemetry_paths;
  manifest.out_dir = out_dir;
  manifest.tool_version = kVersion;
  for (const auto& p : telemetry_paths) manifest.addChecksum(p);
  manifest.write();

  std::vector<CsvTable> tables;
  std::vector<std::string> names;
  for (const auto& path : telemetry_paths) {
    CsvTable t = CsvTable::fromFile(path);
    if (t.rowCount() == 0) {
      throw ConfigError("telemetry csv has no data rows: " + path);
    }
    // schema check up front so a bad column is named before any figure
    for (const char* col : {"time", "px", "py", "pz", "spx", "spy", "spz", "vx",
                            "vy", "vz", "m1", "m2", "m3", "m4"}) {
      t.column(col);
    }
    tables.push_back(std::move(t));
    names.push_back(std::filesystem::path(path).stem().string());
  }

  const auto panelsFor = [&](const std::string& title,
                             const std::vector<std::pair<std::string, std::string>>&
                                 cols,
                             bool with_setpoints, const std::string& y_label) {
    std::vector<plot::Panel> panels;
    for (size_t ti = 0; ti < tables.size(); ++ti) {
      plot::Panel panel;
      panel.title = title + " — " + names[ti];
      panel.y_label = y_label;
      int color = 0;
      for (const auto& [col, label] : cols) {
        panel.series.push_back(makeSeries(tables[ti], "time", col, label,
                                          plot::kPalette[color % 6]));
        if (with_setpoints) {
          panel.series.push_back(makeSeries(tables[ti], "time", "sp" + label,
                                            label + " sp", plot::kPalette[color % 6],
                                            true));
        }
        ++color;
      }
      panels.push_back(std::move(panel));
    }
    return panels;
  };

  plot::writeFigure(out_dir + "/positions.svg",
                    panelsFor("position vs setpoint",
                              {{"px", "x"}, {"py", "y"}, {"pz", "z"}}, true, "[m]"));
  plot::writeFigure(out_dir + "/velocities.svg",
                    panelsFor("velocity", {{"vx", "vx"}, {"vy", "vy"}, {"vz", "vz"}},
                              false, "[m/s]"));
  plot::writeFigure(out_dir + "/motors.svg",
                    panelsFor("motor commands",
                              {{"m1", "m1"}, {"m2", "m2"}, {"m3", "m3"}, {"m4", "m4"}},
                              false, "normalized"));
  std::printf("wrote %s/positions.svg, velocities.svg, motors.svg\n", out_dir.c_str());
  return 0;
}

}  // namespace nnfc
