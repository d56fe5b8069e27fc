// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/policy.hpp"

#include <algorithm>
#include <cmath>

namespace nnfc {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2*pi)

void heUniform(Mlp<float>::Layer& layer, Rng& rng, double scale) {
  const double limit = scale * std::sqrt(6.0 / double(layer.in_dim));
  for (float& w : layer.weights) {
    w = static_cast<float>(rng.uniform(-limit, limit));
  }
  std::fill(layer.bias.begin(), layer.bias.end(), 0.0f);
}

}  // namespace

double squashedGaussianLogDensity(double a, double mu, double sigma) {
  const double z = std::atanh(a);
  const double t = (z - mu) / sigma;
  const double gauss = -0.5 * t * t - std::log(sigma) - kHalfLog2Pi;
  return gauss - std::log(1.0 - a * a + double(kTanhCorrectionEps));
}

GaussianTanhPolicy::GaussianTanhPolicy() {
  net_.addLayer(kObsDim, kHidden1, Activation::kRelu);
  net_.addLayer(kHidden1, kHidden2, Activation::kRelu);
  net_.addLayer(kHidden2, kActDim, Activation::kLinear);
  log_std_.fill(kLogStdInit);
}

void GaussianTanhPolicy::initWeights(Rng& rng) {
  heUniform(net_.layer(0), rng, 1.0);
  heUniform(net_.layer(1), rng, 1.0);
  // Tiny head keeps tanh(mean) near zero at the start of training.
  auto& head = net_.layer(2);
  for (float& w : head.weights) w = static_cast<float>(rng.uniform(-0.01, 0.01));
  std::fill(head.bias.begin(), head.bias.end(), 0.0f);
  log_std_.fill(kLogStdInit);
}

ActionVec GaussianTanhPolicy::deterministicAction(const Observation& obs) const {
  Mlp<float>::Cache cache;
  net_.forward(std::span<const float>(obs.data(), obs.size()), cache);
  ActionVec action;
  for (int i = 0; i < kActDim; ++i) {
    action[i] = std::tanh(cache.output[size_t(i)]);
  }
  return action;
}

GaussianTanhPolicy::Sample GaussianTanhPolicy::sample(std::span<const float> mean,
                                                      Rng& rng) const {
  Sample s;
  double logp = 0.0;
  for (int i = 0; i < kActDim; ++i) {
    const double sigma = std::exp(double(log_std_[size_t(i)]));
    const double z = double(mean[size_t(i)]) + sigma * rng.normal();
    const double a = std::tanh(z);
    const double t = (z - double(mean[size_t(i)])) / sigma;
    logp += -0.5 * t * t - double(log_std_[size_t(i)]) - kHalfLog2Pi;
    logp -= std::log(1.0 - a * a + double(kTanhCorrectionEps));
    s.pre_tanh[size_t(i)] = static_cast<float>(z);
    s.action[size_t(i)] = static_cast<float>(a);
  }
  s.log_prob = static_cast<float>(logp);
  return s;
}

float GaussianTanhPolicy::logProbOfPreTanh(std::span<const float> pre_tanh,
                                           std::span<const float> mean) const {
  double logp = 0.0;
  for (int i = 0; i < kActDim; ++i) {
    const double sigma = std::exp(double(log_std_[size_t(i)]));
    const double z = pre_tanh[size_t(i)];
    const double a = std::tanh(z);
    const double t = (z - double(mean[size_t(i)])) / sigma;
    logp += -0.5 * t * t - double(log_std_[size_t(i)]) - kHalfLog2Pi;
    logp -= std::log(1.0 - a * a + double(kTanhCorrectionEps));
  }
  return static_cast<float>(logp);
}

float GaussianTanhPolicy::entropy() const {
  double h = 0.0;
  for (int i = 0; i < kActDim; ++i) {
    h += double(log_std_[size_t(i)]) + 0.5 + kHalfLog2Pi;
  }
  return static_cast<float>(h);
}

void GaussianTanhPolicy::clampLogStd() {
  for (float& v : log_std_) v = std::clamp(v, kLogStdMin, kLogStdMax);
}

Mlp<float> makeCritic(Rng& rng) {
  Mlp<float> critic;
  critic.addLayer(kObsDim, kHidden1, Activation::kRelu);
  critic.addLayer(kHidden1, kHidden2, Activation::kRelu);
  critic.addLayer(kHidden2, 1, Activation::kLinear);
  heUniform(critic.layer(0), rng, 1.0);
  heUniform(critic.layer(1), rng, 1.0);
  heUniform(critic.layer(2), rng, 1.0);
  return critic;
}

}  // namespace nnfc
