// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "nnfc/errors.hpp"

namespace nnfc {

namespace {

using Clock = std::chrono::steady_clock;

double percentileUs(std::vector<uint64_t>& ns, double q) {
  if (ns.empty()) return 0.0;
  const size_t rank = size_t(std::ceil(q * double(ns.size())));
  const size_t idx = std::min(ns.size() - 1, rank == 0 ? 0 : rank - 1);
  std::nth_element(ns.begin(), ns.begin() + std::ptrdiff_t(idx), ns.end());
  return double(ns[idx]) * 1e-3;
}

PhaseStats statsFrom(std::vector<uint64_t>& ns) {
  PhaseStats s;
  s.count = ns.size();
  s.p50_us = percentileUs(ns, 0.50);
  s.p95_us = percentileUs(ns, 0.95);
  s.p99_us = percentileUs(ns, 0.99);
  s.max_us = ns.empty() ? 0.0 : double(*std::max_element(ns.begin(), ns.end())) * 1e-3;
  return s;
}

void appendPhaseCsv(std::string& out, const char* name, const PhaseStats& s) {
  char row[160];
  std::snprintf(row, sizeof(row), "%s,%llu,%.3f,%.3f,%.3f,%.3f\n", name,
                static_cast<unsigned long long>(s.count), s.p50_us, s.p95_us,
                s.p99_us, s.max_us);
  out += row;
}

}  // namespace

std::string LatencyReport::toCsv() const {
  std::string out = "phase,count,p50_us,p95_us,p99_us,max_us\n";
  appendPhaseCsv(out, "preprocess", preprocess);
  appendPhaseCsv(out, "infer", infer);
  appendPhaseCsv(out, "postprocess", postprocess);
  appendPhaseCsv(out, "total", total);
  return out;
}

std::string LatencyReport::toTable() const {
  char buf[1024];
  std::string out;
  out += "phase         p50 [us]   p95 [us]   p99 [us]   max [us]\n";
  auto row = [&](const char* name, const PhaseStats& s) {
    std::snprintf(buf, sizeof(buf), "%-12s %9.3f  %9.3f  %9.3f  %9.3f\n", name,
                  s.p50_us, s.p95_us, s.p99_us, s.max_us);
    out += buf;
  };
  row("preprocess", preprocess);
  row("infer", infer);
  row("postprocess", postprocess);
  row("total", total);
  std::snprintf(buf, sizeof(buf),
                "650 Hz tick budget: %.2f us, p99 total: %.3f us, margin: %.3f us\n",
                budget_us, total.p99_us, budget_us - total.p99_us);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "Cortex-M7 reference (not reproduced here): infer %.1f us, "
                "full loop %.1f us\n",
                kReferenceInferUs, kReferenceLoopUs);
  out += buf;
  return out;
}

InferenceRuntime::InferenceRuntime(std::vector<uint8_t> blob, size_t budget_bytes)
    : blob_(std::move(blob)), info_(parseModelPack(blob_, budget_bytes)) {
  layers_.reserve(info_.layers.size());
  for (const auto& desc : info_.layers) {
    LayerView view;
    view.in_dim = int(desc.in_dim);
    view.out_dim = int(desc.out_dim);
    view.activation = desc.activation;
    view.weights = reinterpret_cast<const float*>(blob_.data() + desc.weights_offset);
    view.bias = reinterpret_cast<const float*>(blob_.data() + desc.bias_offset);
    layers_.push_back(view);
  }
  const size_t half = info_.required_arena_bytes / (2 * sizeof(float));
  arena_.assign(2 * half, 0.0f);
  ping_ = arena_.data();
  pong_ = arena_.data() + half;
}

InferenceRuntime InferenceRuntime::fromFile(const std::string& path,
                                            size_t budget_bytes) {
  return InferenceRuntime(readBinaryFile(path), budget_bytes);
}

bool InferenceRuntime::preprocess(const Eigen::Vector3d& position,
                                  const Eigen::Vector3d& velocity,
                                  const Eigen::Quaterniond& attitude,
                                  const Eigen::Vector3d& angular_velocity,
                                  const Eigen::Vector3d& setpoint,
                                  Observation& out) const {
  const bool finite = position.allFinite() && velocity.allFinite() &&
                      angular_velocity.allFinite() && setpoint.allFinite() &&
                      std::isfinite(attitude.w()) && std::isfinite(attitude.x()) &&
                      std::isfinite(attitude.y()) && std::isfinite(attitude.z());
  if (!finite) return false;

  RigidBodyState state;
  state.position = position;
  state.velocity = velocity;
  state.attitude = attitude;
  state.angular_velocity = angular_velocity;
  out = buildObservation(state, setpoint);
  return true;
}

bool InferenceRuntime::infer(const Observation& obs, ActionVec& out) {
  const auto start = Clock::now();

  float* src = ping_;
  float* dst = pong_;
  for (int i = 0; i < kObsDim; ++i) src[i] = obs[size_t(i)];

  for (const LayerView& l : layers_) {
    for (int o = 0; o < l.out_dim; ++o) {
      const float* w = l.weights + size_t(o) * size_t(l.in_dim);
      float acc = l.bias[o];
      for (int i = 0; i < l.in_dim; ++i) acc += w[i] * src[i];
      switch (l.activation) {
        case Activation::kLinear:
          break;
        case Activation::kRelu:
          acc = acc > 0.0f ? acc : 0.0f;
          break;
        case Activation::kTanh:
          acc = std::tanh(acc);
          break;
      }
      dst[o] = acc;
    }
    std::swap(src, dst);
  }

  bool ok = true;
  for (int i = 0; i < kActDim; ++i) {
    out[size_t(i)] = src[i];
    ok = ok && std::isfinite(src[i]);
  }

  infer_total_ns_ += uint64_t(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start)
          .count());
  ++infer_calls_;
  return ok;
}

std::array<double, 4> InferenceRuntime::postprocess(const ActionVec& action) {
  return actionToMotorCommand(action);
}

LatencyReport InferenceRuntime::bench(int iterations, uint64_t seed) {
  if (iterations < 1000) {
    throw ConfigError("bench requires at least 1000 iterations");
  }
  constexpr int kWarmup = 100;

  Rng rng(seed);
  std::vector<uint64_t> pre_ns, inf_ns, post_ns, tot_ns;
  pre_ns.reserve(size_t(iterations));
  inf_ns.reserve(size_t(iterations));
  post_ns.reserve(size_t(iterations));
  tot_ns.reserve(size_t(iterations));

  Observation obs{};
  ActionVec action{};
  for (int it = 0; it < iterations + kWarmup; ++it) {
    const Eigen::Vector3d pos(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-3, 0));
    const Eigen::Vector3d vel(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Eigen::Vector3d angvel(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    Eigen::Quaterniond att(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    att.normalize();
    const Eigen::Vector3d setpoint(0, 0, -1.5);

    const auto t0 = Clock::now();
    preprocess(pos, vel, att, angvel, setpoint, obs);
    const auto t1 = Clock::now();
    infer(obs, action);
    const auto t2 = Clock::now();
    postprocess(action);
    const auto t3 = Clock::now();

    if (it < kWarmup) continue;
    const auto ns = [](Clock::time_point a, Clock::time_point b) {
      return uint64_t(std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
    };
    pre_ns.push_back(ns(t0, t1));
    inf_ns.push_back(ns(t1, t2));
    post_ns.push_back(ns(t2, t3));
    tot_ns.push_back(ns(t0, t3));
  }

  LatencyReport report;
  report.preprocess = statsFrom(pre_ns);
  report.infer = statsFrom(inf_ns);
  report.postprocess = statsFrom(post_ns);
  report.total = statsFrom(tot_ns);
  return report;
}

}  // namespace nnfc
