// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nnfc/mlp.hpp"
#include "nnfc/policy.hpp"

namespace nnfc {

/// Default static-memory budget for a loaded model (file + activation arena).
inline constexpr size_t kDefaultBudgetBytes = 50000;

inline constexpr std::array<char, 4> kPolicyMagic{'N', 'N', 'F', 'C'};
inline constexpr std::array<char, 4> kCriticMagic{'N', 'N', 'F', 'V'};
inline constexpr uint32_t kModelPackVersion = 1;

/// Streaming reflected CRC-32 (poly 0xEDB88320, init/final-xor 0xFFFFFFFF).
class Crc32 {
 public:
  void update(std::span<const uint8_t> data);
  uint32_t value() const { return state_ ^ 0xFFFFFFFFu; }

 private:
  uint32_t state_ = 0xFFFFFFFFu;
};

uint32_t crc32(std::span<const uint8_t> data);
uint32_t crc32(const std::string& data);

/// Parsed ModelPack header. Layout (little-endian):
///   magic[4] | version u32 | obs_dim u16 | act_dim u16 | num_layers u32 |
///   per layer {in u32, out u32, activation u32} |
///   per layer weights (out×in f32 row-major) then bias (out f32) |
///   crc32 u32 over all preceding bytes
struct ModelPackInfo {
  struct LayerDesc {
    uint32_t in_dim = 0;
    uint32_t out_dim = 0;
    Activation activation = Activation::kLinear;
    size_t weights_offset = 0;  // byte offset into the blob
    size_t bias_offset = 0;
  };

  std::array<char, 4> magic{};
  uint32_t version = 0;
  uint16_t obs_dim = 0;
  uint16_t act_dim = 0;
  std::vector<LayerDesc> layers;
  size_t file_size = 0;
  size_t required_arena_bytes = 0;  // two ping-pong f32 buffers of max width

  size_t footprintBytes() const { return file_size + required_arena_bytes; }
};

/// Validates magic, version, dimension chain, exact payload length and CRC,
/// then checks footprint against the budget. Never reads past the buffer.
/// Throws FormatError / CorruptionError / BudgetError.
ModelPackInfo parseModelPack(std::span<const uint8_t> bytes,
                             size_t budget_bytes = kDefaultBudgetBytes);

/// Serializes a dense network; float bits are preserved exactly.
std::vector<uint8_t> exportNetwork(const Mlp<float>& net,
                                   const std::array<char, 4>& magic);

/// Freezes the policy head: layers serialized as (relu, relu, tanh); the
/// log-std vector is not exported.
std::vector<uint8_t> exportPolicy(const GaussianTanhPolicy& policy);

/// Sidecar value-function checkpoint; same layout, different magic.
std::vector<uint8_t> exportCritic(const Mlp<float>& critic);

/// Reconstructs an Mlp (copying weights) from a validated blob.
Mlp<float> netFromModelPack(std::span<const uint8_t> bytes,
                            size_t budget_bytes = kDefaultBudgetBytes);

std::vector<uint8_t> readBinaryFile(const std::string& path);
void writeBinaryFile(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace nnfc
