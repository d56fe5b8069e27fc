// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/telemetry.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nnfc/errors.hpp"

namespace nnfc {

const char* flightModeName(FlightMode mode) {
  switch (mode) {
    case FlightMode::kDisarmed:
      return "Disarmed";
    case FlightMode::kPositionMode:
      return "Position";
    case FlightMode::kNeuralMode:
      return "Neural";
  }
  return "Unknown";
}

std::string TelemetryLog::toCsv() const {
  std::string out = kCsvHeader;
  out += '\n';
  char buf[64];
  for (const TelemetryRow& r : rows_) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.time_s);
    out += buf;
    out += ',';
    out += flightModeName(r.mode);
    const double vals[13] = {r.position.x(), r.position.y(), r.position.z(),
                             r.setpoint.x(), r.setpoint.y(), r.setpoint.z(),
                             r.velocity.x(), r.velocity.y(), r.velocity.z(),
                             r.motors[0],    r.motors[1],    r.motors[2],
                             r.motors[3]};
    for (double v : vals) {
      std::snprintf(buf, sizeof(buf), ",%.9g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void TelemetryLog::writeCsv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write telemetry file: " + path);
  out << toCsv();
}

size_t CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("csv is missing required column: " + name);
}

CsvTable CsvTable::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return fromString(ss.str());
}

CsvTable CsvTable::fromString(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw ConfigError("csv has no header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::istringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  if (table.header.empty()) throw ConfigError("csv header row is empty");
  table.columns.resize(table.header.size());

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    size_t col = 0;
    while (std::getline(ls, cell, ',')) {
      if (col >= table.header.size()) {
        throw ConfigError("csv row " + std::to_string(line_no) + " has too many cells");
      }
      double v;
      try {
        size_t pos = 0;
        v = std::stod(cell, &pos);
        if (pos != cell.size()) v = std::nan("");
      } catch (const std::exception&) {
        v = std::nan("");
      }
      table.columns[col].push_back(v);
      ++col;
    }
    if (col != table.header.size()) {
      throw ConfigError("csv row " + std::to_string(line_no) + " has too few cells");
    }
  }
  return table;
}

}  // namespace nnfc
