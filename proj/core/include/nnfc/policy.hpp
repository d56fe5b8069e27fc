// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>

#include "nnfc/mlp.hpp"
#include "nnfc/observation.hpp"
#include "nnfc/rng.hpp"

namespace nnfc {

inline constexpr int kHidden1 = 64;
inline constexpr int kHidden2 = 32;
inline constexpr float kLogStdInit = 0.0f;
inline constexpr float kLogStdMin = -4.0f;
inline constexpr float kLogStdMax = 1.0f;
inline constexpr float kTanhCorrectionEps = 1e-6f;

/// Log density over the squashed action a = tanh(z), z ~ N(mu, sigma):
///   log N(z; mu, sigma) − log(1 − a² + ε)
double squashedGaussianLogDensity(double a, double mu, double sigma);

/// 15→64→32→4 actor with ReLU hidden layers, a linear pre-squash head and a
/// state-independent log-std vector used only during training. Deployment
/// applies tanh to the head output and never samples.
class GaussianTanhPolicy {
 public:
  GaussianTanhPolicy();

  /// He-uniform hidden layers, near-zero head so initial actions hover near 0.
  void initWeights(Rng& rng);

  Mlp<float>& net() { return net_; }
  const Mlp<float>& net() const { return net_; }
  std::array<float, kActDim>& logStd() { return log_std_; }
  const std::array<float, kActDim>& logStd() const { return log_std_; }

  /// Pre-squash mean of the action distribution.
  void meanForward(std::span<const float> obs, Mlp<float>::Cache& cache) const {
    net_.forward(obs, cache);
  }

  /// Deterministic deployment action: tanh of the mean head.
  ActionVec deterministicAction(const Observation& obs) const;

  struct Sample {
    std::array<float, kActDim> pre_tanh;  // z
    ActionVec action;                     // tanh(z)
    float log_prob = 0.0f;
  };

  /// z = mean + sigma·n with the tanh-squash log-prob correction.
  Sample sample(std::span<const float> mean, Rng& rng) const;

  /// Log-prob of a stored pre-squash sample under the current parameters.
  float logProbOfPreTanh(std::span<const float> pre_tanh,
                         std::span<const float> mean) const;

  /// Gaussian entropy Σ (log σ + ½ log 2πe).
  float entropy() const;

  void clampLogStd();

 private:
  Mlp<float> net_;
  std::array<float, kActDim> log_std_;
};

/// 15→64→32→1 value network, ReLU hidden, linear output.
Mlp<float> makeCritic(Rng& rng);

}  // namespace nnfc
