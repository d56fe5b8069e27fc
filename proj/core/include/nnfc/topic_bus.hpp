// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nnfc {

/// Closed set of topics mirroring the autopilot message roles the control
/// loop relies on.
enum class TopicId : int {
  kVehicleAngularVelocity = 0,
  kVehicleAttitude = 1,
  kVehicleLocalPosition = 2,
  kTrajectorySetpoint = 3,
  kActuatorMotors = 4,
  kVehicleCommand = 5,
  kFlightModeStatus = 6,
};

inline constexpr int kTopicCount = 7;

/// Fixed payload arity per topic (angular velocity 3, attitude 4,
/// local position 6 = position + velocity, setpoint 3, motors 4, command 1,
/// mode 1).
int topicPayloadSize(TopicId topic);
const char* topicName(TopicId topic);

struct TopicMessage {
  TopicId topic = TopicId::kVehicleAngularVelocity;
  uint64_t timestamp_us = 0;  // stamped by the bus on publish
  int size = 0;
  std::array<double, 8> data{};
};

/// uORB-style latest-value topic fabric with synchronous callbacks delivered
/// in registration order. Single-threaded by contract; the monotonic clock is
/// virtual and advanced by the tick loop.
class TopicBus {
 public:
  using Callback = std::function<void(const TopicMessage&)>;

  uint64_t nowUs() const { return now_us_; }
  void advanceClock(uint64_t us) { now_us_ += us; }

  /// Latest-value semantics: the slot keeps only the newest message. The
  /// publication counter increments and registered callbacks fire
  /// synchronously before publish returns.
  void publish(TopicMessage message);

  struct ReadResult {
    TopicMessage message;
    uint64_t generation = 0;
  };

  /// Newest message and its generation; empty before the first publish.
  std::optional<ReadResult> readLatest(TopicId topic) const;

  uint64_t generation(TopicId topic) const;

  /// Registers a synchronous callback; returns a deregistration handle.
  int scheduleOn(TopicId topic, Callback callback);
  void deschedule(int handle);

  /// Optional CSV trace of every publish (topic, generation, timestamp,
  /// payload), for debugging and plots.
  void enableTrace() { trace_enabled_ = true; }
  std::string traceCsv() const;

 private:
  struct Slot {
    TopicMessage message;
    uint64_t generation = 0;
  };
  struct Subscription {
    int handle = 0;
    TopicId topic = TopicId::kVehicleAngularVelocity;
    Callback callback;
    bool active = false;
  };

  std::array<Slot, kTopicCount> slots_{};
  std::vector<Subscription> subscriptions_;
  int next_handle_ = 1;
  uint64_t now_us_ = 0;
  bool trace_enabled_ = false;
  std::vector<std::string> trace_rows_;
};

/// Virtual-time tick engine. Per tick: `advance(1/rate_hz)` steps the
/// simulation, `publish_state` emits angular velocity, attitude and local
/// position (in that order), `on_tick_end` (optional) finalizes the tick and
/// may stop the loop, then the clock advances by the integer-microsecond tick
/// period. No wall-clock sleeping. Returns the number of ticks executed.
uint64_t runTicks(TopicBus& bus, const std::function<void(double)>& advance,
                  double rate_hz, double duration_s,
                  const std::function<void()>& publish_state,
                  const std::function<bool(uint64_t)>& on_tick_end = {});

/// Tick period in integer microseconds (1538 at 650 Hz).
uint64_t tickPeriodUs(double rate_hz);

}  // namespace nnfc
