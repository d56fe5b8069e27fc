// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "nnfc/cascade.hpp"
#include "nnfc/vehicle.hpp"

namespace {

nnfc::VehicleParams makeParams() {
  nnfc::VehicleParams p;
  p.k_thrust = nnfc::computeThrustCoefficient(p.mass, 1000.0, p.gravity);
  return p;
}

void BM_Integrate(benchmark::State& state) {
  const nnfc::VehicleParams p = makeParams();
  nnfc::RigidBodyState s;
  s.position = Eigen::Vector3d(0, 0, -1.5);
  s.motor_speed.fill(p.hoverSpeed());
  const std::array<double, 4> cmd{1000, 1000, 1000, 1000};
  for (auto _ : state) {
    s = nnfc::integrate(s, cmd, 1.0 / 650.0, p);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Integrate);

void BM_CascadeTick(benchmark::State& state) {
  const nnfc::VehicleParams p = makeParams();
  nnfc::CascadeGains g;
  g.hover_throttle = p.hoverCommand();
  nnfc::CascadeController ctl(g, p);
  nnfc::RigidBodyState s;
  s.position = Eigen::Vector3d(0.2, 0.1, -1.4);
  s.motor_speed.fill(p.hoverSpeed());
  const Eigen::Vector3d sp(0, 0, -1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctl.tick(s, sp, 1.0 / 650.0));
  }
}
BENCHMARK(BM_CascadeTick);

}  // namespace

BENCHMARK_MAIN();
