// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>

#include "doctest.h"
#include "nnfc/errors.hpp"
#include "nnfc/modelpack.hpp"
#include "nnfc/rng.hpp"

using namespace nnfc;

namespace {

GaussianTanhPolicy randomPolicy(uint64_t seed) {
  GaussianTanhPolicy policy;
  Rng rng(seed);
  policy.initWeights(rng);
  // give the head non-trivial weights so forward outputs are not ~0
  for (auto& w : policy.net().layer(2).weights) w = float(rng.uniform(-0.5, 0.5));
  return policy;
}

}  // namespace

TEST_CASE("crc32 published check values") {
  CHECK(crc32(std::string("")) == 0x00000000u);
  CHECK(crc32(std::string("123456789")) == 0xCBF43926u);
}

TEST_CASE("crc32 streaming matches one-shot") {
  const std::string a = "the quick brown fox ";
  const std::string b = "jumps over the lazy dog";
  Crc32 stream;
  stream.update(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(a.data()), a.size()));
  stream.update(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(b.data()), b.size()));
  CHECK(stream.value() == crc32(a + b));
}

TEST_CASE("canonical policy packs to exactly 13000 bytes") {
  const GaussianTanhPolicy policy = randomPolicy(51);
  const std::vector<uint8_t> bytes = exportPolicy(policy);

  // payload: 4 * (15*64+64 + 64*32+32 + 32*4+4) = 12944
  CHECK(bytes.size() == 13000);
  CHECK(std::memcmp(bytes.data(), "NNFC", 4) == 0);
  CHECK(bytes[4] == 0x01);
  CHECK(bytes[5] == 0x00);
  CHECK(bytes[6] == 0x00);
  CHECK(bytes[7] == 0x00);
}

TEST_CASE("export -> load round trip preserves the forward map") {
  const GaussianTanhPolicy policy = randomPolicy(52);
  const std::vector<uint8_t> bytes = exportPolicy(policy);
  const Mlp<float> loaded = netFromModelPack(bytes);

  REQUIRE(loaded.numLayers() == 3);
  CHECK(loaded.layer(0).activation == Activation::kRelu);
  CHECK(loaded.layer(1).activation == Activation::kRelu);
  CHECK(loaded.layer(2).activation == Activation::kTanh);

  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<float> x(15);
    for (auto& v : x) v = float(rng.uniform(-3, 3));
    const auto got = loaded.forward(x);
    // reference: source network + tanh on the head
    Mlp<float>::Cache cache;
    policy.net().forward(x, cache);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(got[size_t(i)] - std::tanh(cache.output[size_t(i)])) <= 1e-6f);
    }
  }
}

TEST_CASE("re-export of a loaded model is byte identical") {
  const GaussianTanhPolicy policy = randomPolicy(54);
  const std::vector<uint8_t> bytes = exportPolicy(policy);
  const Mlp<float> loaded = netFromModelPack(bytes);
  const std::vector<uint8_t> again = exportNetwork(loaded, kPolicyMagic);
  CHECK(bytes == again);
}

TEST_CASE("arena and footprint accounting") {
  const std::vector<uint8_t> bytes = exportPolicy(randomPolicy(55));
  const ModelPackInfo info = parseModelPack(bytes);
  CHECK(info.required_arena_bytes == 4 * 2 * 64);
  CHECK(info.required_arena_bytes == 512);
  CHECK(info.footprintBytes() == 13512);
  CHECK(info.footprintBytes() < 50000);
  CHECK(info.obs_dim == 15);
  CHECK(info.act_dim == 4);
}

TEST_CASE("payload corruption is caught by the CRC") {
  std::vector<uint8_t> bytes = exportPolicy(randomPolicy(56));
  bytes[100] ^= 0x40;  // inside the first weight block
  CHECK_THROWS_AS(parseModelPack(bytes), CorruptionError);
}

TEST_CASE("truncation is a format error, not a partial model") {
  const std::vector<uint8_t> bytes = exportPolicy(randomPolicy(57));
  for (size_t keep : {0UL, 3UL, 15UL, 51UL, 400UL, bytes.size() - 5}) {
    std::vector<uint8_t> cut(bytes.begin(), bytes.begin() + ptrdiff_t(keep));
    CHECK_THROWS_AS(parseModelPack(cut), FormatError);
  }
}

TEST_CASE("bad magic and version are format errors") {
  std::vector<uint8_t> bytes = exportPolicy(randomPolicy(58));
  std::vector<uint8_t> bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(parseModelPack(bad), FormatError);

  bad = bytes;
  bad[4] = 9;  // version
  CHECK_THROWS_AS(parseModelPack(bad), FormatError);
}

TEST_CASE("inconsistent dimension chain is a format error") {
  std::vector<uint8_t> bytes = exportPolicy(randomPolicy(59));
  // second layer descriptor starts at 16 + 12; corrupt its in_dim
  bytes[28] = 63;
  // keep the CRC valid so the dimension check is what fires
  const size_t body = bytes.size() - 4;
  const uint32_t crc =
      crc32(std::span<const uint8_t>(bytes.data(), body));
  for (int i = 0; i < 4; ++i) bytes[body + size_t(i)] = uint8_t(crc >> (8 * i));
  CHECK_THROWS_AS(parseModelPack(bytes), FormatError);
}

TEST_CASE("footprint over budget is a budget error") {
  const std::vector<uint8_t> bytes = exportPolicy(randomPolicy(60));
  CHECK_THROWS_AS(parseModelPack(bytes, 10000), BudgetError);
  CHECK_NOTHROW(parseModelPack(bytes, 50000));
}

TEST_CASE("critic sidecar uses its own magic with the same layout") {
  Rng rng(61);
  const Mlp<float> critic = makeCritic(rng);
  const std::vector<uint8_t> bytes = exportCritic(critic);
  CHECK(std::memcmp(bytes.data(), "NNFV", 4) == 0);
  const ModelPackInfo info = parseModelPack(bytes);
  CHECK(info.act_dim == 1);
  const Mlp<float> loaded = netFromModelPack(bytes);
  std::vector<float> x(15, 0.25f);
  CHECK(loaded.forward(x)[0] == critic.forward(x)[0]);
}

TEST_CASE("fuzz: mutated blobs never crash and always raise typed errors") {
  const std::vector<uint8_t> pristine = exportPolicy(randomPolicy(62));
  Rng rng(63);
  int parsed_ok = 0;
  for (int i = 0; i < 100000; ++i) {
    std::vector<uint8_t> blob = pristine;
    const int mutations = 1 + int(rng.uniformInt(4));
    for (int m = 0; m < mutations; ++m) {
      const size_t pos = size_t(rng.uniformInt(blob.size()));
      blob[pos] ^= uint8_t(1 + rng.uniformInt(255));  // always changes the byte
    }
    if (rng.uniform() < 0.2) {
      blob.resize(size_t(rng.uniformInt(blob.size())));
    }
    try {
      parseModelPack(blob);
      ++parsed_ok;
    } catch (const Error&) {
      // typed error: fine
    }
  }
  CHECK(parsed_ok == 0);
}
