// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "nnfc/vehicle.hpp"

namespace nnfc {

/// Square-pattern mission: start and end point in the middle of the square,
/// four corner waypoints in between.
struct MissionPlan {
  Eigen::Vector3d center = Eigen::Vector3d(0, 0, -1.5);
  double side = 2.0;
  std::vector<Eigen::Vector3d> waypoints;  // [center, c1, c2, c3, c4, center]
  double accept_radius = 0.15;  // m
  double dwell_s = 1.0;
  double leg_timeout_s = 10.0;
};

/// Corners at center + (±side/2, ±side/2, 0), ordered counterclockwise
/// starting front-right. Throws ConfigError when side <= 0.
MissionPlan squareMission(const Eigen::Vector3d& center, double side,
                          double accept_radius, double dwell_s,
                          double leg_timeout_s);

/// Waypoint sequencer. Advances when the vehicle stays inside accept_radius
/// for dwell seconds continuously, or when the per-leg timeout elapses.
/// The waypoint index never decreases.
class MissionTracker {
 public:
  explicit MissionTracker(MissionPlan plan) : plan_(std::move(plan)) {}

  struct Tick {
    Eigen::Vector3d setpoint;
    bool finished = false;
  };

  Tick tick(const RigidBodyState& state, double now_s);

  const MissionPlan& plan() const { return plan_; }
  size_t waypointIndex() const { return index_; }
  bool finished() const { return finished_; }

  /// Per-leg tracking statistics, recorded as the mission runs.
  struct LegStats {
    int waypoint = 0;
    double mean_error = 0.0;
    double max_error = 0.0;
    double steady_state_error = 0.0;  // mean over the final dwell window
    bool timed_out = false;
  };
  const std::vector<LegStats>& legStats() const { return leg_stats_; }

 private:
  void advance(double now_s, bool timed_out);

  MissionPlan plan_;
  size_t index_ = 0;
  bool finished_ = false;
  bool leg_started_ = false;
  double leg_start_s_ = 0.0;
  std::optional<double> inside_since_s_;
  // per-leg accumulation
  double err_sum_ = 0.0;
  double err_max_ = 0.0;
  uint64_t err_count_ = 0;
  std::vector<std::pair<double, double>> recent_;  // (time, error) for dwell window
  std::vector<LegStats> leg_stats_;
};

}  // namespace nnfc
