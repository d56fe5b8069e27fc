// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nnfc {

/// Reproducibility record written into every output directory before any
/// other output. Re-running the recorded command with the recorded configs
/// and seed regenerates byte-identical CSV outputs.
struct RunManifest {
  std::string command;
  std::vector<std::string> config_paths;
  uint64_t seed = 0;
  std::string out_dir;
  /// CRC-32 of each input artifact (configs, model blobs).
  std::map<std::string, uint32_t> artifact_checksums;
  std::string tool_version;

  void addChecksum(const std::string& path);

  /// Writes <out_dir>/manifest.json, creating the directory when needed.
  void write() const;
};

}  // namespace nnfc
