// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/keyvalue_config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nnfc/errors.hpp"

namespace nnfc {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::string formatConfigDouble(double value) {
  // %.17g round-trips but is noisy; prefer the shortest form that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
    if (std::stod(buf) == value) return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

KeyValueConfig KeyValueConfig::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  KeyValueConfig cfg = fromString(ss.str());
  cfg.path_ = path;
  return cfg;
}

KeyValueConfig KeyValueConfig::fromString(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string stripped = trim(raw);
    if (stripped.empty() || stripped[0] == '#') {
      cfg.lines_.push_back({raw, "", ""});
      continue;
    }
    size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("malformed config line (expected key = value): " + raw);
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key in config line: " + raw);
    cfg.lines_.push_back({"", key, value});
    cfg.values_[key] = value;
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string KeyValueConfig::getString(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string KeyValueConfig::getString(const std::string& key,
                                      const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::getDouble(const std::string& key) const {
  const std::string s = getString(key);
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not a number: " + s);
  }
}

double KeyValueConfig::getDouble(const std::string& key, double fallback) const {
  return has(key) ? getDouble(key) : fallback;
}

int KeyValueConfig::getInt(const std::string& key) const {
  const std::string s = getString(key);
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos, 10);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not an integer: " + s);
  }
}

int KeyValueConfig::getInt(const std::string& key, int fallback) const {
  return has(key) ? getInt(key) : fallback;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    lines_.push_back({"", key, value});
  } else {
    for (auto& line : lines_) {
      if (line.key == key) {
        line.value = value;
        break;
      }
    }
  }
  values_[key] = value;
}

void KeyValueConfig::setDouble(const std::string& key, double value) {
  set(key, formatConfigDouble(value));
}

std::string KeyValueConfig::toString() const {
  std::string out;
  for (const auto& line : lines_) {
    if (line.key.empty()) {
      out += line.raw;
    } else {
      out += line.key + " = " + line.value;
    }
    out += '\n';
  }
  return out;
}

void KeyValueConfig::writeFile(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << toString();
}

}  // namespace nnfc
