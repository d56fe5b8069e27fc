// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

namespace nnfc {

/// Flat `key = value` text configuration. Lines starting with '#' and blank
/// lines are preserved on rewrite so sysid can update a file in place without
/// destroying its layout.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig fromFile(const std::string& path);
  static KeyValueConfig fromString(const std::string& text);

  bool has(const std::string& key) const;

  /// Throws ConfigError naming the key when absent or unparsable.
  double getDouble(const std::string& key) const;
  int getInt(const std::string& key) const;
  std::string getString(const std::string& key) const;

  double getDouble(const std::string& key, double fallback) const;
  int getInt(const std::string& key, int fallback) const;
  std::string getString(const std::string& key, const std::string& fallback) const;

  /// Sets or replaces a key. New keys are appended at the end of the file.
  void set(const std::string& key, const std::string& value);
  void setDouble(const std::string& key, double value);

  /// Canonical serialization: existing lines keep their position, assignments
  /// are rewritten as `key = value`. Writing twice yields identical bytes.
  std::string toString() const;
  void writeFile(const std::string& path) const;

  const std::string& path() const { return path_; }

 private:
  struct Line {
    std::string raw;   // verbatim comment/blank line, or empty when key line
    std::string key;   // non-empty for assignment lines
    std::string value;
  };

  std::vector<Line> lines_;
  std::map<std::string, std::string> values_;
  std::string path_;
};

/// Formats a double the way the config writer does (shortest round-trip form).
std::string formatConfigDouble(double value);

}  // namespace nnfc
