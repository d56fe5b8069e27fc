// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nnfc/adam.hpp"
#include "nnfc/gae.hpp"
#include "nnfc/rng.hpp"

using namespace nnfc;

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  Adam<double> adam(3, 1e-3);
  std::vector<double> params{1.0, -2.0, 0.5};
  const std::vector<double> before = params;
  adam.step(params, std::vector<double>{0.0, 0.0, 0.0});
  CHECK(params == before);
}

TEST_CASE("adam: first-step magnitude is approximately lr") {
  // t=1: m̂ = g, v̂ = g², update = lr·g/(|g|+eps) ≈ lr·sign(g).
  for (double g : {0.5, -3.0, 1e-3}) {
    Adam<double> adam(1, 1e-3);
    std::vector<double> params{0.0};
    adam.step(params, std::vector<double>{g});
    CHECK(std::abs(params[0]) == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(params[0] * g < 0.0);  // moves against the gradient
  }
}

TEST_CASE("adam: two steps match a hand-computed sequence") {
  // lr=0.1, beta1=0.9, beta2=0.999, eps=1e-8, g1=2, g2=-1, starting at 0.
  Adam<double> adam(1, 0.1);
  std::vector<double> p{0.0};

  adam.step(p, std::vector<double>{2.0});
  // m1=0.2, v1=0.004, m̂=2, v̂=4, Δ = 0.1*2/(2+1e-8)
  const double x1 = 0.0 - 0.1 * 2.0 / (2.0 + 1e-8);
  CHECK(p[0] == doctest::Approx(x1).epsilon(1e-12));

  adam.step(p, std::vector<double>{-1.0});
  const double m2 = 0.9 * 0.2 + 0.1 * (-1.0);        // 0.08
  const double v2 = 0.999 * 0.004 + 0.001 * 1.0;     // 0.004996
  const double mhat = m2 / (1.0 - 0.9 * 0.9);        // 0.08/0.19
  const double vhat = v2 / (1.0 - 0.999 * 0.999);    // 0.004996/0.001999
  const double x2 = x1 - 0.1 * mhat / (std::sqrt(vhat) + 1e-8);
  CHECK(p[0] == doctest::Approx(x2).epsilon(1e-12));
}

namespace {

// Brute-force oracle: A_t = Σ_l (γλ)^l δ_{t+l} with the product of
// (1 - done) gates expanded explicitly — a double loop, independent of the
// recursive implementation.
std::vector<double> bruteForceGae(const std::vector<float>& rewards,
                                  const std::vector<float>& values,
                                  float bootstrap, const std::vector<uint8_t>& dones,
                                  double gamma, double lambda) {
  const size_t n = rewards.size();
  std::vector<double> delta(n);
  for (size_t t = 0; t < n; ++t) {
    const double next_v = (t + 1 < n) ? double(values[t + 1]) : double(bootstrap);
    delta[t] = double(rewards[t]) + gamma * next_v * (dones[t] ? 0.0 : 1.0) -
               double(values[t]);
  }
  std::vector<double> adv(n);
  for (size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    double coeff = 1.0;
    for (size_t l = t; l < n; ++l) {
      sum += coeff * delta[l];
      if (dones[l]) break;
      coeff *= gamma * lambda;
    }
    adv[t] = sum;
  }
  return adv;
}

}  // namespace

TEST_CASE("gae: single terminated step") {
  const GaeResult r = gae(std::vector<float>{2.5f}, std::vector<float>{1.0f}, 99.0f,
                          std::vector<uint8_t>{1}, 0.99f, 0.95f);
  CHECK(r.advantages[0] == doctest::Approx(1.5f));
  CHECK(r.returns[0] == doctest::Approx(2.5f));
}

TEST_CASE("gae: all zeros in, all zeros out") {
  const size_t n = 32;
  const GaeResult r = gae(std::vector<float>(n, 0.0f), std::vector<float>(n, 0.0f),
                          0.0f, std::vector<uint8_t>(n, 0), 0.99f, 0.95f);
  for (float a : r.advantages) CHECK(a == 0.0f);
  for (float v : r.returns) CHECK(v == 0.0f);
}

TEST_CASE("gae matches the brute-force oracle on random sequences") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 50;
    std::vector<float> rewards(n), values(n);
    std::vector<uint8_t> dones(n, 0);
    for (auto& r : rewards) r = float(rng.uniform(-2, 2));
    for (auto& v : values) v = float(rng.uniform(-2, 2));
    for (auto& d : dones) d = rng.uniform() < 0.08 ? 1 : 0;
    const float bootstrap = float(rng.uniform(-2, 2));
    const double gamma = rng.uniform(0.9, 1.0);
    const double lambda = rng.uniform(0.9, 1.0);

    const GaeResult got = gae(rewards, values, bootstrap, dones, gamma, lambda);
    const std::vector<double> expected =
        bruteForceGae(rewards, values, bootstrap, dones, gamma, lambda);
    for (size_t t = 0; t < n; ++t) {
      CHECK(std::abs(got.advantages[t] - expected[t]) <= 1e-9);
      CHECK(got.returns[t] ==
            doctest::Approx(got.advantages[t] + double(values[t])));
    }
  }
}

TEST_CASE("gae rejects mismatched lengths") {
  CHECK_THROWS_AS(gae(std::vector<float>{1.0f, 2.0f}, std::vector<float>{1.0f}, 0.0f,
                      std::vector<uint8_t>{0, 0}, 0.99f, 0.95f),
                  std::invalid_argument);
}
