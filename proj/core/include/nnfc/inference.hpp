// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnfc/modelpack.hpp"
#include "nnfc/observation.hpp"
#include "nnfc/rng.hpp"

namespace nnfc {

/// Reference latencies reported for the 460 MHz Cortex-M7 deployment; shown in
/// reports for context, not reproduced at desk scale.
inline constexpr double kReferenceInferUs = 93.4;
inline constexpr double kReferenceLoopUs = 137.6;
/// Control tick budget at 650 Hz.
inline constexpr double kTickBudgetUs = 1e6 / 650.0;

struct PhaseStats {
  uint64_t count = 0;
  double p50_us = 0.0;
  double p95_us = 0.0;
  double p99_us = 0.0;
  double max_us = 0.0;
};

struct LatencyReport {
  PhaseStats preprocess;
  PhaseStats infer;
  PhaseStats postprocess;
  PhaseStats total;
  double budget_us = kTickBudgetUs;

  std::string toTable() const;
  std::string toCsv() const;
};

/// Allocation-free inference engine over an immutable ModelPack blob.
/// All activations live in two ping-pong buffers sized at init; weights are
/// read in place from the blob. One instance per control loop; concurrent
/// infer() calls on one instance are not allowed.
class InferenceRuntime {
 public:
  /// Loads and validates the blob, checks the footprint budget and sizes the
  /// arena. Propagates Format/Corruption/Budget errors.
  InferenceRuntime(std::vector<uint8_t> blob,
                   size_t budget_bytes = kDefaultBudgetBytes);

  static InferenceRuntime fromFile(const std::string& path,
                                   size_t budget_bytes = kDefaultBudgetBytes);

  const ModelPackInfo& model() const { return info_; }
  size_t arenaBytes() const { return info_.required_arena_bytes; }
  size_t footprintBytes() const { return info_.footprintBytes(); }

  /// Builds the shared observation from raw state. Returns false (fault, no
  /// observation) when any input is non-finite.
  bool preprocess(const Eigen::Vector3d& position, const Eigen::Vector3d& velocity,
                  const Eigen::Quaterniond& attitude,
                  const Eigen::Vector3d& angular_velocity,
                  const Eigen::Vector3d& setpoint, Observation& out) const;

  /// Arena forward pass; the final tanh keeps outputs in [-1, 1]. Deployment
  /// uses the distribution mean, so no sampling happens here. Returns false
  /// on a non-finite output (fault flag). Records per-call wall time.
  bool infer(const Observation& obs, ActionVec& out);

  /// u = (a + 1) / 2 per motor.
  static std::array<double, 4> postprocess(const ActionVec& action);

  /// Lifetime infer-call timing (outside of bench runs).
  uint64_t inferCalls() const { return infer_calls_; }
  double inferTotalUs() const { return infer_total_ns_ * 1e-3; }

  /// Percentile latency over `iterations` random observations; the first 100
  /// calls warm up and are excluded. Requires iterations >= 1000.
  LatencyReport bench(int iterations, uint64_t seed = 42);

 private:
  struct LayerView {
    int in_dim;
    int out_dim;
    Activation activation;
    const float* weights;
    const float* bias;
  };

  std::vector<uint8_t> blob_;
  ModelPackInfo info_;
  std::vector<LayerView> layers_;
  std::vector<float> arena_;  // two ping-pong halves
  float* ping_ = nullptr;
  float* pong_ = nullptr;
  uint64_t infer_calls_ = 0;
  uint64_t infer_total_ns_ = 0;
};

}  // namespace nnfc
