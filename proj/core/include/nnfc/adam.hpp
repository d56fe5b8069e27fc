// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace nnfc {

/// Standard bias-corrected Adam over a flat parameter vector.
template <typename Scalar>
class Adam {
 public:
  Adam(size_t param_count, Scalar lr, Scalar beta1 = Scalar(0.9),
       Scalar beta2 = Scalar(0.999), Scalar eps = Scalar(1e-8))
      : lr_(lr),
        beta1_(beta1),
        beta2_(beta2),
        eps_(eps),
        m_(param_count, Scalar(0)),
        v_(param_count, Scalar(0)) {}

  uint64_t steps() const { return t_; }
  Scalar learningRate() const { return lr_; }
  void setLearningRate(Scalar lr) { lr_ = lr; }

  void step(std::span<Scalar> params, std::span<const Scalar> grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
      throw std::invalid_argument("Adam::step: size mismatch");
    }
    ++t_;
    const Scalar bc1 = Scalar(1) - std::pow(beta1_, Scalar(t_));
    const Scalar bc2 = Scalar(1) - std::pow(beta2_, Scalar(t_));
    for (size_t i = 0; i < m_.size(); ++i) {
      const Scalar g = grads[i];
      m_[i] = beta1_ * m_[i] + (Scalar(1) - beta1_) * g;
      v_[i] = beta2_ * v_[i] + (Scalar(1) - beta2_) * g * g;
      const Scalar m_hat = m_[i] / bc1;
      const Scalar v_hat = v_[i] / bc2;
      params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
  }

 private:
  Scalar lr_;
  Scalar beta1_;
  Scalar beta2_;
  Scalar eps_;
  uint64_t t_ = 0;
  std::vector<Scalar> m_;
  std::vector<Scalar> v_;
};

}  // namespace nnfc
