// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace nnfc {

enum class Activation : uint32_t { kLinear = 0, kRelu = 1, kTanh = 2 };

/// Fully connected feed-forward network with explicit reverse-mode gradients.
/// Weights are row-major out×in. Templated on the scalar so the gradient
/// oracles can run the identical code path in double precision.
template <typename Scalar>
class Mlp {
 public:
  struct Layer {
    int in_dim = 0;
    int out_dim = 0;
    Activation activation = Activation::kLinear;
    std::vector<Scalar> weights;  // out x in, row-major
    std::vector<Scalar> bias;     // out
  };

  /// Layer inputs and pre-activations captured by forward() for backward().
  /// Reusing one Cache across calls avoids steady-state allocation.
  struct Cache {
    std::vector<std::vector<Scalar>> inputs;   // per layer
    std::vector<std::vector<Scalar>> pre_act;  // per layer
    std::vector<Scalar> output;
    std::vector<Scalar> delta;  // backward scratch
    std::vector<Scalar> prev;   // backward scratch
  };

  Mlp() = default;

  void addLayer(int in_dim, int out_dim, Activation activation) {
    if (!layers_.empty() && layers_.back().out_dim != in_dim) {
      throw std::invalid_argument("Mlp::addLayer: dimension chain mismatch");
    }
    Layer layer;
    layer.in_dim = in_dim;
    layer.out_dim = out_dim;
    layer.activation = activation;
    layer.weights.assign(size_t(in_dim) * size_t(out_dim), Scalar(0));
    layer.bias.assign(size_t(out_dim), Scalar(0));
    layers_.push_back(std::move(layer));
  }

  int inputDim() const { return layers_.empty() ? 0 : layers_.front().in_dim; }
  int outputDim() const { return layers_.empty() ? 0 : layers_.back().out_dim; }
  size_t numLayers() const { return layers_.size(); }
  Layer& layer(size_t i) { return layers_[i]; }
  const Layer& layer(size_t i) const { return layers_[i]; }

  size_t paramCount() const {
    size_t n = 0;
    for (const Layer& l : layers_) n += l.weights.size() + l.bias.size();
    return n;
  }

  size_t layerParamOffset(size_t index) const {
    size_t off = 0;
    for (size_t li = 0; li < index; ++li) {
      off += layers_[li].weights.size() + layers_[li].bias.size();
    }
    return off;
  }

  /// Affine → activation per layer; the cache keeps what backward() needs.
  void forward(std::span<const Scalar> input, Cache& cache) const {
    if (int(input.size()) != inputDim()) {
      throw std::invalid_argument("Mlp::forward: input dimension mismatch");
    }
    cache.inputs.resize(layers_.size());
    cache.pre_act.resize(layers_.size());
    cache.inputs[0].assign(input.begin(), input.end());
    for (size_t li = 0; li < layers_.size(); ++li) {
      const Layer& l = layers_[li];
      const std::vector<Scalar>& x = cache.inputs[li];
      std::vector<Scalar>& z = cache.pre_act[li];
      z.resize(size_t(l.out_dim));
      for (int o = 0; o < l.out_dim; ++o) {
        const Scalar* w = l.weights.data() + size_t(o) * size_t(l.in_dim);
        Scalar acc = l.bias[size_t(o)];
        for (int i = 0; i < l.in_dim; ++i) acc += w[i] * x[size_t(i)];
        z[size_t(o)] = acc;
      }
      std::vector<Scalar>& out =
          (li + 1 < layers_.size()) ? cache.inputs[li + 1] : cache.output;
      out.resize(size_t(l.out_dim));
      applyActivation(l.activation, z, out);
    }
  }

  /// Convenience forward without cache reuse.
  std::vector<Scalar> forward(std::span<const Scalar> input) const {
    Cache cache;
    forward(input, cache);
    return cache.output;
  }

  /// Exact reverse-mode gradients of the forward map. Accumulates (+=) into
  /// `grads` (length paramCount, ordered [W0, b0, W1, b1, ...]) and optionally
  /// writes d(loss)/d(input).
  void backward(Cache& cache, std::span<const Scalar> grad_output,
                std::span<Scalar> grads, std::vector<Scalar>* grad_input = nullptr) const {
    if (grads.size() != paramCount()) {
      throw std::invalid_argument("Mlp::backward: gradient buffer size mismatch");
    }
    std::vector<Scalar>& delta = cache.delta;
    delta.assign(grad_output.begin(), grad_output.end());
    size_t offset = paramCount();
    for (size_t li = layers_.size(); li-- > 0;) {
      const Layer& l = layers_[li];
      offset -= l.weights.size() + l.bias.size();
      Scalar* grad_w = grads.data() + offset;
      Scalar* grad_b = grad_w + l.weights.size();

      const std::vector<Scalar>& z = cache.pre_act[li];
      for (int o = 0; o < l.out_dim; ++o) {
        delta[size_t(o)] *= activationDerivative(l.activation, z[size_t(o)]);
      }

      const std::vector<Scalar>& x = cache.inputs[li];
      for (int o = 0; o < l.out_dim; ++o) {
        const Scalar d = delta[size_t(o)];
        Scalar* gw = grad_w + size_t(o) * size_t(l.in_dim);
        for (int i = 0; i < l.in_dim; ++i) gw[i] += d * x[size_t(i)];
        grad_b[o] += d;
      }

      if (li > 0 || grad_input != nullptr) {
        std::vector<Scalar>& prev = cache.prev;
        prev.assign(size_t(l.in_dim), Scalar(0));
        for (int o = 0; o < l.out_dim; ++o) {
          const Scalar d = delta[size_t(o)];
          const Scalar* w = l.weights.data() + size_t(o) * size_t(l.in_dim);
          for (int i = 0; i < l.in_dim; ++i) prev[size_t(i)] += d * w[i];
        }
        std::swap(delta, prev);
      }
    }
    if (grad_input != nullptr) {
      grad_input->assign(delta.begin(), delta.end());
    }
  }

  /// Copies all parameters into/out of a flat buffer (same order as grads).
  void flattenParams(std::span<Scalar> out) const {
    size_t k = 0;
    for (const Layer& l : layers_) {
      for (Scalar w : l.weights) out[k++] = w;
      for (Scalar b : l.bias) out[k++] = b;
    }
  }
  void unflattenParams(std::span<const Scalar> in) {
    size_t k = 0;
    for (Layer& l : layers_) {
      for (Scalar& w : l.weights) w = in[k++];
      for (Scalar& b : l.bias) b = in[k++];
    }
  }

 private:
  static void applyActivation(Activation act, const std::vector<Scalar>& z,
                              std::vector<Scalar>& out) {
    switch (act) {
      case Activation::kLinear:
        out = z;
        break;
      case Activation::kRelu:
        for (size_t i = 0; i < z.size(); ++i) out[i] = z[i] > Scalar(0) ? z[i] : Scalar(0);
        break;
      case Activation::kTanh:
        for (size_t i = 0; i < z.size(); ++i) out[i] = std::tanh(z[i]);
        break;
    }
  }

  static Scalar activationDerivative(Activation act, Scalar z) {
    switch (act) {
      case Activation::kLinear:
        return Scalar(1);
      case Activation::kRelu:
        return z > Scalar(0) ? Scalar(1) : Scalar(0);
      case Activation::kTanh: {
        const Scalar t = std::tanh(z);
        return Scalar(1) - t * t;
      }
    }
    return Scalar(1);
  }

  std::vector<Layer> layers_;
};

}  // namespace nnfc
