// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nnfc {

/// `sysid`: derive k_thrust and the hover throttle from the measured mass and
/// hover RPM, writing them back into the config in place. Idempotent.
int cmdSysid(const std::string& config_path);

/// `train`: PPO training from the config; writes manifest.json, curves.csv,
/// policy.nnfc and policy_critic.nnfc into out_dir.
int cmdTrain(const std::string& config_path, std::optional<uint64_t> seed,
             const std::string& out_dir);

/// `fly`: scripted flight from a scenario file; writes manifest.json,
/// telemetry.csv, legs.csv and summary.txt into out_dir.
int cmdFly(const std::string& config_path, const std::string& scenario_path,
           const std::string& model_override, std::optional<uint64_t> seed,
           const std::string& out_dir, std::optional<size_t> budget_bytes);

/// `bench`: latency percentiles for preprocess/infer/postprocess against the
/// 650 Hz budget; optional CSV output.
int cmdBench(const std::string& model_path, int iterations, size_t budget_bytes,
             const std::string& out_dir);

/// `report`: static SVG figures (position vs setpoint, velocities, motor
/// commands) from one telemetry CSV, or side-by-side panels from two.
int cmdReport(const std::vector<std::string>& telemetry_paths,
              const std::string& out_dir);

}  // namespace nnfc
