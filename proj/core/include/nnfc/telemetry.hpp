// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace nnfc {

enum class FlightMode : int {
  kDisarmed = 0,
  kPositionMode = 1,
  kNeuralMode = 2,
};

const char* flightModeName(FlightMode mode);

/// One row per control tick. The CSV schema is stable:
/// time,mode,px,py,pz,spx,spy,spz,vx,vy,vz,m1,m2,m3,m4
struct TelemetryRow {
  double time_s = 0.0;
  FlightMode mode = FlightMode::kDisarmed;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d setpoint = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  std::array<double, 4> motors{};
};

class TelemetryLog {
 public:
  void append(const TelemetryRow& row) { rows_.push_back(row); }
  const std::vector<TelemetryRow>& rows() const { return rows_; }
  size_t size() const { return rows_.size(); }

  std::string toCsv() const;
  void writeCsv(const std::string& path) const;

  static constexpr const char* kCsvHeader =
      "time,mode,px,py,pz,spx,spy,spz,vx,vy,vz,m1,m2,m3,m4";

 private:
  std::vector<TelemetryRow> rows_;
};

/// Loose CSV table (header + numeric columns) used by the report command.
/// Non-numeric cells parse as NaN. Throws ConfigError on malformed input.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // column-major
  size_t rowCount() const { return columns.empty() ? 0 : columns.front().size(); }

  /// Column index by name; throws ConfigError naming the column when missing.
  size_t column(const std::string& name) const;

  static CsvTable fromFile(const std::string& path);
  static CsvTable fromString(const std::string& text);
};

}  // namespace nnfc
