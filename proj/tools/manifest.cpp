// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "manifest.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "nnfc/errors.hpp"
#include "nnfc/modelpack.hpp"

namespace nnfc {

void RunManifest::addChecksum(const std::string& path) {
  const std::vector<uint8_t> bytes = readBinaryFile(path);
  artifact_checksums[path] = crc32(bytes);
}

void RunManifest::write() const {
  std::filesystem::create_directories(out_dir);

  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_paths"] = config_paths;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  nlohmann::ordered_json sums = nlohmann::ordered_json::object();
  char hex[16];
  for (const auto& [path, crc] : artifact_checksums) {
    std::snprintf(hex, sizeof(hex), "%08x", crc);
    sums[path] = hex;
  }
  j["artifact_checksums"] = sums;
  j["tool_version"] = tool_version;

  const std::string path = out_dir + "/manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace nnfc
