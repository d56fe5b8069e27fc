// Copyright (c) 2026 nnfc contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "nnfc/topic_bus.hpp"

using namespace nnfc;

namespace {

TopicMessage angularVelocityMsg(double x, double y, double z) {
  TopicMessage m;
  m.topic = TopicId::kVehicleAngularVelocity;
  m.size = 3;
  m.data = {x, y, z};
  return m;
}

}  // namespace

TEST_CASE("publish then read returns the same payload") {
  TopicBus bus;
  bus.publish(angularVelocityMsg(1, 2, 3));
  const auto r = bus.readLatest(TopicId::kVehicleAngularVelocity);
  REQUIRE(r.has_value());
  CHECK(r->message.data[0] == 1);
  CHECK(r->message.data[1] == 2);
  CHECK(r->message.data[2] == 3);
}

TEST_CASE("latest-value semantics keep only the newest message") {
  TopicBus bus;
  bus.publish(angularVelocityMsg(1, 0, 0));
  bus.publish(angularVelocityMsg(2, 0, 0));
  const auto r = bus.readLatest(TopicId::kVehicleAngularVelocity);
  REQUIRE(r.has_value());
  CHECK(r->message.data[0] == 2);
  CHECK(r->generation == 2);
}

TEST_CASE("fresh bus reads empty; generations count publishes") {
  TopicBus bus;
  CHECK_FALSE(bus.readLatest(TopicId::kVehicleAttitude).has_value());
  CHECK(bus.generation(TopicId::kVehicleAttitude) == 0);

  bus.publish(angularVelocityMsg(0, 0, 0));
  CHECK(bus.readLatest(TopicId::kVehicleAngularVelocity)->generation == 1);
  for (int i = 0; i < 9; ++i) bus.publish(angularVelocityMsg(0, 0, double(i)));
  CHECK(bus.generation(TopicId::kVehicleAngularVelocity) == 10);
}

TEST_CASE("payload arity is enforced per topic") {
  TopicBus bus;
  TopicMessage bad;
  bad.topic = TopicId::kVehicleAttitude;
  bad.size = 3;  // attitude is 4 wide
  CHECK_THROWS_AS(bus.publish(bad), std::invalid_argument);
}

TEST_CASE("callbacks fire once per publish, in registration order") {
  TopicBus bus;
  std::vector<int> order;
  bus.scheduleOn(TopicId::kVehicleAngularVelocity,
                 [&](const TopicMessage&) { order.push_back(1); });
  bus.scheduleOn(TopicId::kVehicleAngularVelocity,
                 [&](const TopicMessage&) { order.push_back(2); });

  for (int i = 0; i < 3; ++i) bus.publish(angularVelocityMsg(0, 0, 0));
  CHECK(order == std::vector<int>{1, 2, 1, 2, 1, 2});
}

TEST_CASE("deregistered callbacks never fire again") {
  TopicBus bus;
  int count = 0;
  const int handle = bus.scheduleOn(TopicId::kVehicleAngularVelocity,
                                    [&](const TopicMessage&) { ++count; });
  bus.publish(angularVelocityMsg(0, 0, 0));
  bus.deschedule(handle);
  bus.publish(angularVelocityMsg(0, 0, 0));
  bus.publish(angularVelocityMsg(0, 0, 0));
  CHECK(count == 1);
}

TEST_CASE("callbacks only fire for their own topic") {
  TopicBus bus;
  int count = 0;
  bus.scheduleOn(TopicId::kVehicleAttitude, [&](const TopicMessage&) { ++count; });
  bus.publish(angularVelocityMsg(0, 0, 0));
  CHECK(count == 0);
}

TEST_CASE("run_ticks at 650 Hz for one second publishes exactly 650 times") {
  TopicBus bus;
  uint64_t publishes = 0;
  const uint64_t ticks = runTicks(
      bus, [](double) {}, 650.0, 1.0,
      [&] {
        TopicMessage m;
        m.topic = TopicId::kVehicleAngularVelocity;
        m.size = 3;
        bus.publish(m);
        TopicMessage att;
        att.topic = TopicId::kVehicleAttitude;
        att.size = 4;
        att.data = {1, 0, 0, 0};
        bus.publish(att);
        TopicMessage pos;
        pos.topic = TopicId::kVehicleLocalPosition;
        pos.size = 6;
        bus.publish(pos);
        ++publishes;
      });
  CHECK(ticks == 650);
  CHECK(publishes == 650);
  CHECK(bus.generation(TopicId::kVehicleAngularVelocity) == 650);
}

TEST_CASE("tick timestamps advance by exactly 1538 us") {
  TopicBus bus;
  std::vector<uint64_t> stamps;
  bus.scheduleOn(TopicId::kVehicleAngularVelocity,
                 [&](const TopicMessage& m) { stamps.push_back(m.timestamp_us); });
  runTicks(
      bus, [](double) {}, 650.0, 0.05,
      [&] {
        TopicMessage m;
        m.topic = TopicId::kVehicleAngularVelocity;
        m.size = 3;
        bus.publish(m);
      });
  CHECK(tickPeriodUs(650.0) == 1538);
  REQUIRE(stamps.size() >= 2);
  for (size_t i = 1; i < stamps.size(); ++i) {
    CHECK(stamps[i] - stamps[i - 1] == 1538);
  }
}

TEST_CASE("attitude and angular velocity share a generation after each tick") {
  TopicBus bus;
  runTicks(
      bus, [](double) {}, 650.0, 0.02,
      [&] {
        TopicMessage m;
        m.topic = TopicId::kVehicleAngularVelocity;
        m.size = 3;
        bus.publish(m);
        TopicMessage att;
        att.topic = TopicId::kVehicleAttitude;
        att.size = 4;
        att.data = {1, 0, 0, 0};
        bus.publish(att);
      },
      [&](uint64_t) {
        CHECK(bus.generation(TopicId::kVehicleAttitude) ==
              bus.generation(TopicId::kVehicleAngularVelocity));
        return true;
      });
}

TEST_CASE("identical publish sequences give identical callback sequences") {
  auto run = [] {
    TopicBus bus;
    std::vector<double> seen;
    bus.scheduleOn(TopicId::kVehicleAngularVelocity,
                   [&](const TopicMessage& m) { seen.push_back(m.data[0]); });
    bus.scheduleOn(TopicId::kVehicleAttitude,
                   [&](const TopicMessage& m) { seen.push_back(100 + m.data[0]); });
    for (int i = 0; i < 50; ++i) {
      bus.publish(angularVelocityMsg(i, 0, 0));
      TopicMessage att;
      att.topic = TopicId::kVehicleAttitude;
      att.size = 4;
      att.data = {double(i), 0, 0, 1};
      bus.publish(att);
    }
    return seen;
  };
  CHECK(run() == run());
}

TEST_CASE("controller callback sees the state message that triggered it") {
  TopicBus bus;
  std::vector<double> observed;
  bus.scheduleOn(TopicId::kVehicleAngularVelocity, [&](const TopicMessage& m) {
    // synchronous delivery: the triggering message is the latest value
    const auto r = bus.readLatest(TopicId::kVehicleAngularVelocity);
    REQUIRE(r.has_value());
    CHECK(r->message.data[0] == m.data[0]);
    observed.push_back(m.data[0]);
  });
  for (int i = 0; i < 10; ++i) bus.publish(angularVelocityMsg(i, 0, 0));
  CHECK(observed.size() == 10);
}

TEST_CASE("bus trace records publishes as csv") {
  TopicBus bus;
  bus.enableTrace();
  bus.publish(angularVelocityMsg(1, 2, 3));
  const std::string csv = bus.traceCsv();
  CHECK(csv.find("topic,generation,timestamp_us") == 0);
  CHECK(csv.find("vehicle_angular_velocity,1,0,1,2,3") != std::string::npos);
}
