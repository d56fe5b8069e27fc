// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/mission.hpp"

#include "nnfc/errors.hpp"

namespace nnfc {

MissionPlan squareMission(const Eigen::Vector3d& center, double side,
                          double accept_radius, double dwell_s,
                          double leg_timeout_s) {
  if (!(side > 0.0)) throw ConfigError("squareMission: side must be > 0");
  if (!(accept_radius > 0.0)) throw ConfigError("squareMission: accept_radius must be > 0");

  MissionPlan plan;
  plan.center = center;
  plan.side = side;
  plan.accept_radius = accept_radius;
  plan.dwell_s = dwell_s;
  plan.leg_timeout_s = leg_timeout_s;

  const double h = side / 2.0;
  plan.waypoints = {
      center,
      center + Eigen::Vector3d(+h, +h, 0.0),
      center + Eigen::Vector3d(-h, +h, 0.0),
      center + Eigen::Vector3d(-h, -h, 0.0),
      center + Eigen::Vector3d(+h, -h, 0.0),
      center,
  };
  return plan;
}

void MissionTracker::advance(double now_s, bool timed_out) {
  LegStats stats;
  stats.waypoint = int(index_);
  stats.mean_error = err_count_ ? err_sum_ / double(err_count_) : 0.0;
  stats.max_error = err_max_;
  stats.timed_out = timed_out;

  double ss_sum = 0.0;
  uint64_t ss_count = 0;
  for (const auto& [t, e] : recent_) {
    if (t >= now_s - plan_.dwell_s) {
      ss_sum += e;
      ++ss_count;
    }
  }
  stats.steady_state_error = ss_count ? ss_sum / double(ss_count) : err_max_;
  leg_stats_.push_back(stats);

  if (index_ + 1 >= plan_.waypoints.size()) {
    finished_ = true;
  } else {
    ++index_;
    leg_start_s_ = now_s;
    inside_since_s_.reset();
    err_sum_ = 0.0;
    err_max_ = 0.0;
    err_count_ = 0;
    recent_.clear();
  }
}

MissionTracker::Tick MissionTracker::tick(const RigidBodyState& state, double now_s) {
  if (finished_) {
    return {plan_.waypoints.back(), true};
  }
  if (!leg_started_) {
    leg_started_ = true;
    leg_start_s_ = now_s;
  }

  const Eigen::Vector3d& wp = plan_.waypoints[index_];
  const double err = (state.position - wp).norm();

  err_sum_ += err;
  err_max_ = std::max(err_max_, err);
  ++err_count_;
  recent_.emplace_back(now_s, err);
  // keep only the dwell window
  while (!recent_.empty() && recent_.front().first < now_s - plan_.dwell_s - 0.1) {
    recent_.erase(recent_.begin());
  }

  if (err <= plan_.accept_radius) {
    if (!inside_since_s_) inside_since_s_ = now_s;
    if (now_s - *inside_since_s_ >= plan_.dwell_s) {
      advance(now_s, false);
    }
  } else {
    inside_since_s_.reset();
    if (now_s - leg_start_s_ >= plan_.leg_timeout_s) {
      advance(now_s, true);
    }
  }

  if (finished_) {
    return {plan_.waypoints.back(), true};
  }
  return {plan_.waypoints[index_], false};
}

}  // namespace nnfc
