// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/modelpack.hpp"

#include <cstring>
#include <fstream>

#include "nnfc/errors.hpp"

namespace nnfc {

namespace {

constexpr uint32_t kCrcPoly = 0xEDB88320u;
constexpr size_t kHeaderBytes = 16;
constexpr size_t kLayerDescBytes = 12;
constexpr uint32_t kMaxLayers = 64;
constexpr uint32_t kMaxLayerDim = 65535;

const uint32_t* crcTable() {
  static const auto table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k) {
        c = (c & 1u) ? (kCrcPoly ^ (c >> 1)) : (c >> 1);
      }
      t[i] = c;
    }
    return t;
  }();
  return table.data();
}

class ByteWriter {
 public:
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(uint8_t(v >> (8 * i)));
  }
  void u16(uint16_t v) {
    bytes_.push_back(uint8_t(v));
    bytes_.push_back(uint8_t(v >> 8));
  }
  void f32(float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  void raw(const char* data, size_t n) {
    bytes_.insert(bytes_.end(), data, data + n);
  }
  std::vector<uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(bytes_[pos_ + size_t(i)]) << (8 * i);
    pos_ += 4;
    return v;
  }
  uint16_t u16() {
    need(2);
    uint16_t v = uint16_t(bytes_[pos_] | (uint16_t(bytes_[pos_ + 1]) << 8));
    pos_ += 2;
    return v;
  }
  void skip(size_t n) {
    need(n);
    pos_ += n;
  }
  size_t pos() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError("modelpack: truncated file");
    }
  }
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

float readF32At(std::span<const uint8_t> bytes, size_t offset) {
  uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= uint32_t(bytes[offset + size_t(i)]) << (8 * i);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

void Crc32::update(std::span<const uint8_t> data) {
  const uint32_t* table = crcTable();
  uint32_t c = state_;
  for (uint8_t b : data) {
    c = table[(c ^ b) & 0xFFu] ^ (c >> 8);
  }
  state_ = c;
}

uint32_t crc32(std::span<const uint8_t> data) {
  Crc32 crc;
  crc.update(data);
  return crc.value();
}

uint32_t crc32(const std::string& data) {
  return crc32(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(data.data()), data.size()));
}

std::vector<uint8_t> exportNetwork(const Mlp<float>& net,
                                   const std::array<char, 4>& magic) {
  if (net.numLayers() == 0) throw FormatError("exportNetwork: empty network");
  ByteWriter w;
  w.raw(magic.data(), 4);
  w.u32(kModelPackVersion);
  w.u16(uint16_t(net.inputDim()));
  w.u16(uint16_t(net.outputDim()));
  w.u32(uint32_t(net.numLayers()));
  for (size_t li = 0; li < net.numLayers(); ++li) {
    const auto& l = net.layer(li);
    w.u32(uint32_t(l.in_dim));
    w.u32(uint32_t(l.out_dim));
    w.u32(uint32_t(l.activation));
  }
  for (size_t li = 0; li < net.numLayers(); ++li) {
    const auto& l = net.layer(li);
    for (float v : l.weights) w.f32(v);
    for (float v : l.bias) w.f32(v);
  }
  const uint32_t crc = crc32(w.bytes());
  w.u32(crc);
  return std::move(w.bytes());
}

std::vector<uint8_t> exportPolicy(const GaussianTanhPolicy& policy) {
  Mlp<float> frozen = policy.net();
  frozen.layer(frozen.numLayers() - 1).activation = Activation::kTanh;
  return exportNetwork(frozen, kPolicyMagic);
}

std::vector<uint8_t> exportCritic(const Mlp<float>& critic) {
  return exportNetwork(critic, kCriticMagic);
}

ModelPackInfo parseModelPack(std::span<const uint8_t> bytes, size_t budget_bytes) {
  if (bytes.size() < kHeaderBytes + 4) {
    throw FormatError("modelpack: file too short");
  }

  ModelPackInfo info;
  info.file_size = bytes.size();

  ByteReader r(bytes);
  std::memcpy(info.magic.data(), bytes.data(), 4);
  r.skip(4);
  if (info.magic != kPolicyMagic && info.magic != kCriticMagic) {
    throw FormatError("modelpack: bad magic");
  }
  info.version = r.u32();
  if (info.version != kModelPackVersion) {
    throw FormatError("modelpack: unsupported version " + std::to_string(info.version));
  }
  info.obs_dim = r.u16();
  info.act_dim = r.u16();
  const uint32_t num_layers = r.u32();
  if (num_layers == 0 || num_layers > kMaxLayers) {
    throw FormatError("modelpack: implausible layer count");
  }

  uint32_t max_width = info.obs_dim;
  size_t payload_floats = 0;
  info.layers.resize(num_layers);
  for (uint32_t li = 0; li < num_layers; ++li) {
    auto& l = info.layers[li];
    l.in_dim = r.u32();
    l.out_dim = r.u32();
    const uint32_t act = r.u32();
    if (l.in_dim == 0 || l.out_dim == 0 || l.in_dim > kMaxLayerDim ||
        l.out_dim > kMaxLayerDim) {
      throw FormatError("modelpack: implausible layer dimensions");
    }
    if (act > uint32_t(Activation::kTanh)) {
      throw FormatError("modelpack: unknown activation code");
    }
    l.activation = Activation(act);
    payload_floats += size_t(l.in_dim) * l.out_dim + l.out_dim;
    max_width = std::max({max_width, l.in_dim, l.out_dim});
  }

  if (info.layers.front().in_dim != info.obs_dim) {
    throw FormatError("modelpack: first layer does not match obs_dim");
  }
  if (info.layers.back().out_dim != info.act_dim) {
    throw FormatError("modelpack: last layer does not match act_dim");
  }
  for (uint32_t li = 0; li + 1 < num_layers; ++li) {
    if (info.layers[li].out_dim != info.layers[li + 1].in_dim) {
      throw FormatError("modelpack: layer dimension chain broken");
    }
  }

  size_t offset = r.pos();
  for (auto& l : info.layers) {
    l.weights_offset = offset;
    offset += size_t(l.in_dim) * l.out_dim * 4;
    l.bias_offset = offset;
    offset += size_t(l.out_dim) * 4;
  }
  if (offset + 4 != bytes.size()) {
    throw FormatError("modelpack: payload length mismatch");
  }

  const uint32_t stored_crc = uint32_t(bytes[offset]) |
                              (uint32_t(bytes[offset + 1]) << 8) |
                              (uint32_t(bytes[offset + 2]) << 16) |
                              (uint32_t(bytes[offset + 3]) << 24);
  if (crc32(bytes.subspan(0, offset)) != stored_crc) {
    throw CorruptionError("modelpack: CRC mismatch");
  }

  info.required_arena_bytes = 4 * 2 * size_t(max_width);
  if (info.footprintBytes() > budget_bytes) {
    throw BudgetError("modelpack: footprint " +
                      std::to_string(info.footprintBytes()) +
                      " bytes exceeds budget " + std::to_string(budget_bytes));
  }
  return info;
}

Mlp<float> netFromModelPack(std::span<const uint8_t> bytes, size_t budget_bytes) {
  const ModelPackInfo info = parseModelPack(bytes, budget_bytes);
  Mlp<float> net;
  for (const auto& l : info.layers) {
    net.addLayer(int(l.in_dim), int(l.out_dim), l.activation);
  }
  for (size_t li = 0; li < info.layers.size(); ++li) {
    const auto& desc = info.layers[li];
    auto& layer = net.layer(li);
    for (size_t k = 0; k < layer.weights.size(); ++k) {
      layer.weights[k] = readF32At(bytes, desc.weights_offset + 4 * k);
    }
    for (size_t k = 0; k < layer.bias.size(); ++k) {
      layer.bias[k] = readF32At(bytes, desc.bias_offset + 4 * k);
    }
  }
  return net;
}

std::vector<uint8_t> readBinaryFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

void writeBinaryFile(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
}

}  // namespace nnfc
