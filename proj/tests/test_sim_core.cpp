#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "rrsim/random.hpp"
#include "rrsim/simulator.hpp"

using namespace rrsim;

TEST(SimTime, ArithmeticStaysInMicroseconds) {
  EXPECT_EQ(SimTime::millis(3).us(), 3000);
  EXPECT_EQ(SimTime::seconds(2.3).us(), 2'300'000);
  EXPECT_EQ((SimTime::whole_seconds(1) * 2).us(), 2'000'000);
  EXPECT_LT(SimTime::micros(1), SimTime::micros(2));
}

TEST(Simulator, EventAtNowPrecedesLaterEvents) {
  Simulator sim;
  std::vector<std::string> order;
  sim.schedule(SimTime::millis(5), [&] {
    sim.schedule(SimTime::millis(7), [&] { order.push_back("later"); });
    sim.schedule(sim.now(), [&] { order.push_back("now"); });
  });
  sim.run(SimTime::millis(10));
  EXPECT_EQ(order, (std::vector<std::string>{"now", "later"}));
}

TEST(Simulator, SameTimeDispatchesInScheduleOrder) {
  Simulator sim;
  std::string order;
  sim.schedule(SimTime::seconds(5.0), [&] { order += 'A'; });
  sim.schedule(SimTime::seconds(5.0), [&] { order += 'B'; });
  sim.run(SimTime::seconds(6.0));
  EXPECT_EQ(order, "AB");
}

TEST(Simulator, CancelledEventNeverRuns) {
  Simulator sim;
  bool fired = false;
  auto h = sim.schedule(SimTime::seconds(1.0), [&] { fired = true; });
  EXPECT_TRUE(sim.is_pending(h));
  sim.cancel(h);
  EXPECT_FALSE(sim.is_pending(h));
  sim.run(SimTime::seconds(2.0));
  EXPECT_FALSE(fired);
  sim.cancel(h);
}

TEST(Simulator, EmptyRunParksClockAtHorizon) {
  Simulator sim;
  EXPECT_EQ(sim.run(SimTime::whole_seconds(900)), 0u);
  EXPECT_EQ(sim.now(), SimTime::whole_seconds(900));
}

TEST(Simulator, RunStopsAtHorizon) {
  Simulator sim;
  for (int t = 1; t <= 3; ++t) sim.schedule(SimTime::whole_seconds(t), [] {});
  EXPECT_EQ(sim.run(SimTime::whole_seconds(2)), 2u);
  EXPECT_EQ(sim.pending(), 1u);
}

TEST(Simulator, HandlerMayScheduleEarlierThanPending) {
  Simulator sim;
  std::vector<int> order;
  sim.schedule(SimTime::whole_seconds(1), [&] {
    order.push_back(1);
    sim.schedule(SimTime::millis(1500), [&] { order.push_back(2); });
  });
  sim.schedule(SimTime::whole_seconds(2), [&] { order.push_back(3); });
  sim.run(SimTime::whole_seconds(3));
  EXPECT_EQ(order, (std::vector<int>{1, 2, 3}));
}

TEST(Simulator, SchedulingInThePastThrows) {
  Simulator sim;
  sim.run(SimTime::whole_seconds(1));
  EXPECT_THROW(sim.schedule(SimTime::millis(500), [] {}), std::logic_error);
}

TEST(RandomSource, SameSeedSameDraws) {
  RandomSource a(42), b(42);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomSource, StreamsAreIndependentOfDrawOrder) {
  const RandomSource root(7);
  RandomSource s1 = root.stream(streams::kMobility + 3);
  RandomSource consumed = root.stream(streams::kTraffic);
  for (int i = 0; i < 100; ++i) consumed.next_u64();
  RandomSource s2 = root.stream(streams::kMobility + 3);
  EXPECT_EQ(s1.next_u64(), s2.next_u64());
  EXPECT_NE(root.stream(1).next_u64(), root.stream(2).next_u64());
}

TEST(RandomSource, RangesRespected) {
  RandomSource r(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform(2.0, 3.0);
    EXPECT_GE(u, 2.0);
    EXPECT_LT(u, 3.0);
    const double v = r.uniform_left_open(0.0, 1.0);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_LT(r.uniform_int(5, 9), 9u);
  }
  EXPECT_THROW(r.uniform(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(r.uniform_int(4, 4), std::invalid_argument);
}
