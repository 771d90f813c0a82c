#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "support.hpp"

using namespace rrsim;
using namespace rrsim::testing;

TEST(Ers, DefaultScheduleThenExhausted) {
  ErsSchedule s;
  ErsAttemptState st;
  std::vector<int> ttls;
  while (auto t = ers_next_ttl(s, st)) ttls.push_back(*t);
  EXPECT_EQ(ttls, (std::vector<int>{1, 3, 5, 7, 35, 35, 35}));
  EXPECT_EQ(s.max_rings(), 7);
  EXPECT_FALSE(ers_next_ttl(s, st));
}

TEST(Ers, StartAtDiameterFloodsEveryAttempt) {
  ErsSchedule s;
  s.ttl_start = s.net_diameter;
  ErsAttemptState st;
  std::vector<int> ttls;
  while (auto t = ers_next_ttl(s, st)) ttls.push_back(*t);
  EXPECT_EQ(ttls, (std::vector<int>{35, 35, 35}));
}

TEST(Ers, RingTimeoutCoversRoundTrip) {
  ErsSchedule s;
  const SimTime hop = RadioModel{}.hop_delay(48);
  EXPECT_EQ(s.ring_timeout(3, hop), hop * 6 + SimTime::millis(10));
  s.ttl_increment = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Ers, EarlyReplyStopsRings) {
  auto net = static_network(chain(3), Protocol::Aodv);
  send_data(*net, NodeId(0), NodeId(1), 1);
  net->sim.run(SimTime::whole_seconds(2));
  ASSERT_EQ(net->stats.discoveries().size(), 1u);
  EXPECT_EQ(net->stats.discoveries()[0].ring_ttls, (std::vector<int>{1}));
  EXPECT_TRUE(net->stats.discoveries()[0].succeeded);
}

TEST(SendBuffer, OverflowEvictsOldest) {
  SendBuffer b;
  int evicted = 0;
  std::uint64_t first_evicted = 0;
  for (std::uint64_t i = 1; i <= 65; ++i) {
    Packet p;
    p.target = NodeId(1);
    DataHeader h;
    h.uid = i;
    p.body = h;
    if (auto e = b.push(p, SimTime::zero())) {
      ++evicted;
      first_evicted = e->as<DataHeader>().uid;
    }
  }
  EXPECT_EQ(evicted, 1);
  EXPECT_EQ(first_evicted, 1u);
  EXPECT_EQ(b.size(), 64u);
}

TEST(SendBuffer, ExpiryAndTakeByDestination) {
  SendBuffer b;
  Packet a;
  a.target = NodeId(1);
  a.body = DataHeader{};
  Packet c = a;
  c.target = NodeId(2);
  b.push(a, SimTime::zero());
  b.push(c, SimTime::whole_seconds(20));
  EXPECT_EQ(b.expire(SimTime::whole_seconds(31)).size(), 1u);
  EXPECT_FALSE(b.has(NodeId(1)));
  EXPECT_EQ(b.take(NodeId(2)).size(), 1u);
  EXPECT_EQ(b.size(), 0u);
}

TEST(RouteTable, EqualSeqShorterWins) {
  SeqRoutingTable<RouteEntry> t;
  const SimTime life = SimTime::whole_seconds(10);
  EXPECT_TRUE(t.offer(RouteOffer{NodeId(9), NodeId(1), 4, 5u, life}, SimTime::zero()));
  EXPECT_TRUE(t.offer(RouteOffer{NodeId(9), NodeId(2), 3, 5u, life}, SimTime::zero()));
  EXPECT_EQ(t.find(NodeId(9))->hop_count, 3);
  EXPECT_FALSE(t.offer(RouteOffer{NodeId(9), NodeId(3), 4, 5u, life}, SimTime::zero()));
}

TEST(RouteTable, FresherSeqWinsDespiteLength) {
  SeqRoutingTable<RouteEntry> t;
  const SimTime life = SimTime::whole_seconds(10);
  t.offer(RouteOffer{NodeId(9), NodeId(1), 3, 5u, life}, SimTime::zero());
  EXPECT_TRUE(t.offer(RouteOffer{NodeId(9), NodeId(2), 9, 6u, life}, SimTime::zero()));
  EXPECT_EQ(t.find(NodeId(9))->hop_count, 9);
  EXPECT_EQ(t.find(NodeId(9))->dest_seq, 6u);
  EXPECT_FALSE(t.offer(RouteOffer{NodeId(9), NodeId(1), 1, 4u, life}, SimTime::zero()));
}

TEST(RouteTable, InvalidateBumpsButNeverLowers) {
  RunStats stats(1);
  SeqRoutingTable<RouteEntry> t(&stats);
  t.offer(RouteOffer{NodeId(9), NodeId(1), 3, 5u, SimTime::whole_seconds(10)}, SimTime::zero());
  t.invalidate(*t.find(NodeId(9)), true);
  EXPECT_EQ(t.find(NodeId(9))->dest_seq, 6u);
  EXPECT_FALSE(t.find(NodeId(9))->usable(SimTime::zero()));
  t.raise_seq(*t.find(NodeId(9)), 2);
  EXPECT_EQ(t.find(NodeId(9))->dest_seq, 6u);
  EXPECT_EQ(stats.violation_count(), 0u);
}

namespace {

// Nodes that heard the first-ring RREQ of a discovery from node 0.
std::set<std::uint32_t> first_ring_reach(Protocol proto, int ttl) {
  ProtocolParams params;
  params.ers.ttl_start = ttl;
  auto net = static_network(chain(10), proto, params);
  std::set<std::uint32_t> reached;
  net->medium.add_delivery_observer([&](NodeId, NodeId to, const Packet& p) {
    if (p.kind() == PacketKind::Rreq && p.origin == NodeId(0) && to != NodeId(0)) reached.insert(to.value);
  });
  send_data(*net, NodeId(0), NodeId(9), 1);
  const SimTime window = params.ers.ring_timeout(ttl, net->medium.radio().hop_delay(net->medium.sizes().rreq));
  net->sim.run(window - SimTime::micros(1));
  return reached;
}

}  // namespace

TEST(TtlScope, ChainReachEqualsTtl) {
  for (Protocol proto : {Protocol::Aodv, Protocol::Dsr, Protocol::Dymo}) {
    for (int k : {1, 3, 5}) {
      std::set<std::uint32_t> expected;
      for (int i = 1; i <= k; ++i) expected.insert(static_cast<std::uint32_t>(i));
      EXPECT_EQ(first_ring_reach(proto, k), expected) << to_string(proto) << " ttl " << k;
    }
  }
}

TEST(TtlScope, TargetAnswersAndDoesNotRebroadcast) {
  ProtocolParams params;
  params.ers.ttl_start = 3;
  auto net = static_network(chain(4), Protocol::Aodv, params);
  int rreq_from_target = 0;
  net->medium.set_transmit_observer([&](NodeId sender, const Packet& p) {
    if (p.kind() == PacketKind::Rreq && sender == NodeId(3)) ++rreq_from_target;
  });
  send_data(*net, NodeId(0), NodeId(3), 1);
  net->sim.run(SimTime::whole_seconds(1));
  EXPECT_EQ(rreq_from_target, 0);
  EXPECT_EQ(net->metrics.delivered(), 1u);
}

TEST(TtlScope, NineHopChainGivesNineHopRoute) {
  for (Protocol proto : {Protocol::Aodv, Protocol::AodvLl, Protocol::Dymo, Protocol::Dsr, Protocol::DsrM}) {
    auto net = static_network(chain(10), proto);
    send_data(*net, NodeId(0), NodeId(9), 1);
    net->sim.run(SimTime::whole_seconds(2));
    EXPECT_EQ(net->metrics.delivered(), 1u) << to_string(proto);
    int hops = -1;
    if (proto == Protocol::Dsr || proto == Protocol::DsrM) {
      auto r = net->agent_as<DsrAgent>(NodeId(0)).cache().find(NodeId(9)).route;
      if (r) hops = static_cast<int>(r->size()) - 1;
    } else if (proto == Protocol::Dymo) {
      if (auto* e = net->agent_as<DymoAgent>(NodeId(0)).table().find(NodeId(9))) hops = e->hop_count;
    } else {
      if (auto* e = net->agent_as<AodvAgent>(NodeId(0)).table().find(NodeId(9))) hops = e->hop_count;
    }
    EXPECT_EQ(hops, 9) << to_string(proto);
  }
}

namespace {

// Node 1 is out of range until `appear`.
std::unique_ptr<Network> late_neighbor(Protocol proto, SimTime appear) {
  KeyframeMobility m;
  m.add_node({{SimTime::zero(), {0, 0}}});
  m.add_node({{SimTime::zero(), {900, 0}}, {appear - SimTime::micros(1), {900, 0}}, {appear, {100, 0}}});
  return moving_network(std::move(m), proto);
}

}  // namespace

TEST(Buffering, DelayIncludesWaitForRoute) {
  const SimTime appear = SimTime::millis(2250);
  auto net = late_neighbor(Protocol::Aodv, appear);
  send_data_at(*net, SimTime::whole_seconds(2), NodeId(0), NodeId(1), 1);
  net->sim.run(SimTime::whole_seconds(4));
  const MetricsReport r = net->metrics.finalize(SimTime::whole_seconds(4));
  ASSERT_EQ(r.data_delivered, 1u);
  // The seventh ring is the first sent after node 1 appears.
  const ErsSchedule s;
  const RadioModel radio;
  SimTime t = SimTime::zero();
  for (int ttl : {1, 3, 5, 7, 35, 35}) t += s.ring_timeout(ttl, radio.hop_delay(48));
  const SimTime expected = t + radio.hop_delay(48) + radio.hop_delay(44) + radio.hop_delay(512);
  EXPECT_EQ(SimTime::seconds(r.avg_e2e_delay_s), expected);
  EXPECT_GT(r.avg_e2e_delay_s, 0.25);
}

TEST(Buffering, ExhaustedDiscoveryDropsBufferedPackets) {
  auto net = late_neighbor(Protocol::Aodv, SimTime::whole_seconds(100));
  for (std::uint64_t i = 1; i <= 3; ++i) send_data(*net, NodeId(0), NodeId(1), i);
  net->sim.run(SimTime::whole_seconds(5));
  const MetricsReport r = net->metrics.finalize(SimTime::whole_seconds(5));
  EXPECT_EQ(r.data_delivered, 0u);
  EXPECT_EQ(r.data_dropped, 3u);
  EXPECT_TRUE(r.conserved());
  ASSERT_EQ(net->stats.discoveries().size(), 1u);
  EXPECT_TRUE(net->stats.discoveries()[0].exhausted);
  EXPECT_EQ(net->stats.discoveries()[0].ring_ttls.size(), 7u);
}
