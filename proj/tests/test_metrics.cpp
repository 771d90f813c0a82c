#include <gtest/gtest.h>

#include "rrsim/metrics.hpp"

using namespace rrsim;

namespace {

Packet control(PacketKind k) {
  Packet p;
  switch (k) {
    case PacketKind::Rreq: p.body = RreqHeader{}; break;
    case PacketKind::Rrep: p.body = RrepHeader{}; break;
    case PacketKind::Rerr: p.body = RerrHeader{}; break;
    case PacketKind::Hello: p.body = HelloHeader{}; break;
    case PacketKind::Data: p.body = DataHeader{}; break;
  }
  return p;
}

}  // namespace

TEST(Metrics, Conservation) {
  Metrics m;
  for (std::uint64_t i = 1; i <= 12; ++i) m.record_originated(i);
  for (std::uint64_t i = 1; i <= 7; ++i) m.record_delivered(i, SimTime::millis(10), 512);
  for (std::uint64_t i = 8; i <= 10; ++i) m.record_dropped(i, DropReason::LinkFailure);
  const auto r = m.finalize(SimTime::whole_seconds(900));
  EXPECT_EQ(r.data_delivered, 7u);
  EXPECT_EQ(r.data_dropped, 3u);
  EXPECT_EQ(r.in_flight_at_end, 2u);
  EXPECT_TRUE(r.conserved());
  EXPECT_EQ(r.drops_by_reason[static_cast<std::size_t>(DropReason::LinkFailure)], 3u);
}

TEST(Metrics, SecondTerminalEventIsAViolationNotACount) {
  Metrics m;
  m.record_originated(1);
  m.record_delivered(1, SimTime::millis(5), 512);
  m.record_dropped(1, DropReason::LinkFailure);
  m.record_delivered(99, SimTime::millis(5), 512);
  const auto r = m.finalize(SimTime::whole_seconds(1));
  EXPECT_EQ(r.data_delivered, 1u);
  EXPECT_EQ(r.data_dropped, 0u);
  EXPECT_EQ(r.terminal_state_violations, 2u);
  EXPECT_TRUE(r.conserved());
}

TEST(Metrics, AverageDelay) {
  Metrics m;
  for (std::uint64_t i = 1; i <= 3; ++i) {
    m.record_originated(i);
    m.record_delivered(i, SimTime::whole_seconds(static_cast<std::int64_t>(i)), 512);
  }
  EXPECT_DOUBLE_EQ(m.finalize(SimTime::whole_seconds(10)).avg_e2e_delay_s, 2.0);
}

TEST(Metrics, NormalisedRoutingLoad) {
  Metrics m;
  for (int i = 0; i < 40; ++i) m.record_transmission(control(PacketKind::Rreq));
  for (int i = 0; i < 30; ++i) m.record_transmission(control(PacketKind::Rrep));
  for (int i = 0; i < 20; ++i) m.record_transmission(control(PacketKind::Rerr));
  for (int i = 0; i < 10; ++i) m.record_transmission(control(PacketKind::Hello));
  m.record_transmission(control(PacketKind::Data));
  for (std::uint64_t i = 1; i <= 50; ++i) {
    m.record_originated(i);
    m.record_delivered(i, SimTime::millis(1), 512);
  }
  const auto r = m.finalize(SimTime::whole_seconds(10));
  EXPECT_EQ(r.control_tx.total(), 100u);
  EXPECT_EQ(r.data_tx, 1u);
  ASSERT_TRUE(r.nrl);
  EXPECT_DOUBLE_EQ(*r.nrl, 2.0);
}

TEST(Metrics, NrlUndefinedWithoutDeliveries) {
  Metrics m;
  m.record_transmission(control(PacketKind::Rreq));
  EXPECT_FALSE(m.finalize(SimTime::whole_seconds(1)).nrl);
}

TEST(Metrics, Throughput) {
  Metrics m;
  for (std::uint64_t i = 1; i <= 7; ++i) {
    m.record_originated(i);
    m.record_delivered(i, SimTime::millis(1), 512);
  }
  EXPECT_DOUBLE_EQ(m.finalize(SimTime::whole_seconds(900)).throughput_bps, 7.0 * 512 * 8 / 900);
  EXPECT_THROW(m.finalize(SimTime::zero()), std::invalid_argument);
}
