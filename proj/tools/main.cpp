// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "nnfc/errors.hpp"
#include "nnfc/modelpack.hpp"
#include "nnfc/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nnfc — desk-scale neural flight control pipeline"};
  app.set_version_flag("--version", nnfc::kVersion);
  app.require_subcommand(1);

  std::string config = "config/vehicle.cfg";
  std::string scenario;
  std::string model;
  std::string out = "out";
  std::optional<uint64_t> seed;
  size_t budget_bytes = nnfc::kDefaultBudgetBytes;
  int iterations = 100000;
  std::vector<std::string> telemetry;

  auto* sysid = app.add_subcommand(
      "sysid", "derive k_thrust and hover throttle from mass and hover RPM");
  sysid->add_option("--config", config, "vehicle config file")
      ->capture_default_str();

  auto* train = app.add_subcommand("train", "train the position-setpoint policy");
  train->add_option("--config", config, "vehicle+training config file")
      ->capture_default_str();
  train->add_option("--seed", seed, "override ppo.seed");
  train->add_option("--out", out, "output directory")->capture_default_str();

  auto* fly = app.add_subcommand("fly", "run a scripted flight in virtual time");
  fly->add_option("--config", config, "vehicle config file")->capture_default_str();
  fly->add_option("--scenario", scenario, "scenario file")->required();
  fly->add_option("--model", model, "override scenario.model");
  fly->add_option("--seed", seed, "override scenario.seed");
  fly->add_option("--budget-bytes", budget_bytes, "model memory budget")
      ->capture_default_str();
  fly->add_option("--out", out, "output directory")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "latency percentiles for the runtime");
  bench->add_option("--model", model, "model file (.nnfc)")->required();
  bench->add_option("--iterations", iterations, "benchmark iterations")
      ->capture_default_str();
  bench->add_option("--budget-bytes", budget_bytes, "model memory budget")
      ->capture_default_str();
  bench->add_option("--out", out, "optional output directory for latency.csv");

  auto* report = app.add_subcommand("report", "render SVG figures from telemetry");
  report->add_option("csv", telemetry, "one or two telemetry CSV files")
      ->required()
      ->expected(1, 2);
  report->add_option("--out", out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sysid) return nnfc::cmdSysid(config);
    if (*train) return nnfc::cmdTrain(config, seed, out);
    if (*fly) {
      std::optional<size_t> budget;
      if (fly->count("--budget-bytes")) budget = budget_bytes;
      return nnfc::cmdFly(config, scenario, model, seed, out, budget);
    }
    if (*bench) return nnfc::cmdBench(model, iterations, budget_bytes,
                                      bench->count("--out") ? out : "");
    if (*report) return nnfc::cmdReport(telemetry, out);
  } catch (const nnfc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return int(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
