// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#include "nnfc/topic_bus.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nnfc {

int topicPayloadSize(TopicId topic) {
  switch (topic) {
    case TopicId::kVehicleAngularVelocity:
      return 3;
    case TopicId::kVehicleAttitude:
      return 4;
    case TopicId::kVehicleLocalPosition:
      return 6;
    case TopicId::kTrajectorySetpoint:
      return 3;
    case TopicId::kActuatorMotors:
      return 4;
    case TopicId::kVehicleCommand:
      return 1;
    case TopicId::kFlightModeStatus:
      return 1;
  }
  return 0;
}

const char* topicName(TopicId topic) {
  switch (topic) {
    case TopicId::kVehicleAngularVelocity:
      return "vehicle_angular_velocity";
    case TopicId::kVehicleAttitude:
      return "vehicle_attitude";
    case TopicId::kVehicleLocalPosition:
      return "vehicle_local_position";
    case TopicId::kTrajectorySetpoint:
      return "trajectory_setpoint";
    case TopicId::kActuatorMotors:
      return "actuator_motors";
    case TopicId::kVehicleCommand:
      return "vehicle_command";
    case TopicId::kFlightModeStatus:
      return "flight_mode_status";
  }
  return "unknown";
}

void TopicBus::publish(TopicMessage message) {
  const int idx = int(message.topic);
  if (idx < 0 || idx >= kTopicCount) {
    throw std::invalid_argument("TopicBus::publish: invalid topic");
  }
  if (message.size != topicPayloadSize(message.topic)) {
    throw std::invalid_argument(std::string("TopicBus::publish: payload arity for ") +
                                topicName(message.topic));
  }
  message.timestamp_us = now_us_;

  Slot& slot = slots_[size_t(idx)];
  slot.message = message;
  ++slot.generation;

  if (trace_enabled_) {
    char row[256];
    int n = std::snprintf(row, sizeof(row), "%s,%llu,%llu", topicName(message.topic),
                          static_cast<unsigned long long>(slot.generation),
                          static_cast<unsigned long long>(message.timestamp_us));
    std::string s(row, size_t(n));
    for (int i = 0; i < message.size; ++i) {
      std::snprintf(row, sizeof(row), ",%.9g", message.data[size_t(i)]);
      s += row;
    }
    trace_rows_.push_back(std::move(s));
  }

  // Registration order; subscriptions added during delivery fire next publish.
  const size_t n = subscriptions_.size();
  for (size_t i = 0; i < n; ++i) {
    if (subscriptions_[i].active && subscriptions_[i].topic == message.topic) {
      subscriptions_[i].callback(slot.message);
    }
  }
}

std::optional<TopicBus::ReadResult> TopicBus::readLatest(TopicId topic) const {
  const Slot& slot = slots_[size_t(int(topic))];
  if (slot.generation == 0) return std::nullopt;
  return ReadResult{slot.message, slot.generation};
}

uint64_t TopicBus::generation(TopicId topic) const {
  return slots_[size_t(int(topic))].generation;
}

int TopicBus::scheduleOn(TopicId topic, Callback callback) {
  Subscription sub;
  sub.handle = next_handle_++;
  sub.topic = topic;
  sub.callback = std::move(callback);
  sub.active = true;
  subscriptions_.push_back(std::move(sub));
  return subscriptions_.back().handle;
}

void TopicBus::deschedule(int handle) {
  for (auto& sub : subscriptions_) {
    if (sub.handle == handle) sub.active = false;
  }
}

std::string TopicBus::traceCsv() const {
  std::string out = "topic,generation,timestamp_us,payload\n";
  for (const auto& row : trace_rows_) {
    out += row;
    out += '\n';
  }
  return out;
}

uint64_t tickPeriodUs(double rate_hz) {
  return uint64_t(std::llround(1e6 / rate_hz));
}

uint64_t runTicks(TopicBus& bus, const std::function<void(double)>& advance,
                  double rate_hz, double duration_s,
                  const std::function<void()>& publish_state,
                  const std::function<bool(uint64_t)>& on_tick_end) {
  if (!(rate_hz > 0.0)) {
    throw std::invalid_argument("runTicks: rate_hz must be > 0");
  }
  const uint64_t period_us = tickPeriodUs(rate_hz);
  const uint64_t num_ticks = uint64_t(std::llround(rate_hz * duration_s));
  const double dt = 1.0 / rate_hz;

  uint64_t tick = 0;
  for (; tick < num_ticks; ++tick) {
    advance(dt);
    publish_state();
    const bool keep_going = on_tick_end ? on_tick_end(tick) : true;
    bus.advanceClock(period_us);
    if (!keep_going) {
      ++tick;
      break;
    }
  }
  return tick;
}

}  // namespace nnfc
