// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "nnfc/inference.hpp"
#include "nnfc/modelpack.hpp"
#include "nnfc/rng.hpp"

namespace {

nnfc::InferenceRuntime makeRuntime() {
  nnfc::GaussianTanhPolicy policy;
  nnfc::Rng rng(1234);
  policy.initWeights(rng);
  return nnfc::InferenceRuntime(nnfc::exportPolicy(policy));
}

void BM_Infer(benchmark::State& state) {
  nnfc::InferenceRuntime runtime = makeRuntime();
  nnfc::Observation obs{};
  obs[0] = 1.0f;
  obs[3] = 1.0f;
  obs[7] = 1.0f;
  nnfc::ActionVec action;
  for (auto _ : state) {
    runtime.infer(obs, action);
    benchmark::DoNotOptimize(action);
  }
}
BENCHMARK(BM_Infer);

void BM_PreprocessInferPostprocess(benchmark::State& state) {
  nnfc::InferenceRuntime runtime = makeRuntime();
  const Eigen::Vector3d pos(0.2, -0.4, -1.4);
  const Eigen::Vector3d vel(0.1, 0.0, 0.05);
  const Eigen::Vector3d angvel(0.01, 0.02, -0.01);
  const Eigen::Quaterniond att = Eigen::Quaterniond::Identity();
  const Eigen::Vector3d sp(0, 0, -1.5);
  nnfc::Observation obs;
  nnfc::ActionVec action;
  for (auto _ : state) {
    runtime.preprocess(pos, vel, att, angvel, sp, obs);
    runtime.infer(obs, action);
    benchmark::DoNotOptimize(nnfc::InferenceRuntime::postprocess(action));
  }
}
BENCHMARK(BM_PreprocessInferPostprocess);

}  // namespace

BENCHMARK_MAIN();
