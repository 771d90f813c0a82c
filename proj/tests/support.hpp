#pragma once

#include <memory>
#include <vector>

#include "rrsim.hpp"

namespace rrsim::testing {

// Nodes spaced `gap` metres apart on a line; 200 m keeps only adjacent pairs in range.
inline std::vector<Vec2> chain(std::size_t n, double gap = 200.0) {
  std::vector<Vec2> pos;
  for (std::size_t i = 0; i < n; ++i) pos.push_back({gap * static_cast<double>(i), 0.0});
  return pos;
}

inline std::unique_ptr<Network> static_network(const std::vector<Vec2>& pos, Protocol proto,
                                               ProtocolParams params = {}, std::uint64_t seed = 1) {
  auto net = std::make_unique<Network>(std::make_unique<KeyframeMobility>(KeyframeMobility::fixed(pos)), RadioModel{},
                                       params, seed);
  install_protocol(*net, proto);
  return net;
}

inline std::unique_ptr<Network> moving_network(KeyframeMobility mobility, Protocol proto, ProtocolParams params = {}) {
  auto net = std::make_unique<Network>(std::make_unique<KeyframeMobility>(std::move(mobility)), RadioModel{}, params, 1);
  install_protocol(*net, proto);
  return net;
}

// Hands one DATA packet to the source's agent at the current time.
inline void send_data(Network& net, NodeId from, NodeId to, std::uint64_t uid, std::uint32_t payload = 512) {
  Packet p;
  p.origin = from;
  p.target = to;
  p.ttl = net.params.data_ttl;
  DataHeader h;
  h.uid = uid;
  h.payload_bytes = payload;
  h.originated_at = net.now();
  p.body = std::move(h);
  net.metrics.record_originated(uid);
  net.agent(from).originate(std::move(p));
}

inline void send_data_at(Network& net, SimTime at, NodeId from, NodeId to, std::uint64_t uid) {
  net.sim.schedule(at, [&net, from, to, uid] { send_data(net, from, to, uid); });
}

// A packet every `gap` from `start` until before `stop`; uids continue from `first_uid`.
inline std::uint64_t send_every(Network& net, NodeId from, NodeId to, SimTime start, SimTime stop, SimTime gap,
                                std::uint64_t first_uid) {
  std::uint64_t uid = first_uid;
  for (SimTime t = start; t < stop; t += gap) send_data_at(net, t, from, to, uid++);
  return uid;
}

// Keyframe track that holds `pos` and then leaves the field at `leave`.
inline std::vector<KeyframeMobility::Keyframe> departs(Vec2 pos, SimTime leave) {
  return {{SimTime::zero(), pos}, {leave - SimTime::micros(1), pos}, {leave, {pos.x, pos.y + 5000.0}}};
}

// Counts every reception of a given packet kind, per receiving node.
struct ReceptionLog {
  std::vector<std::vector<Packet>> by_node;

  explicit ReceptionLog(Network& net) : by_node(net.size()) {
    net.medium.add_delivery_observer([this](NodeId, NodeId to, const Packet& p) { by_node[to.value].push_back(p); });
  }

  std::size_t count(NodeId n, PacketKind k) const {
    std::size_t c = 0;
    for (const Packet& p : by_node[n.value]) c += p.kind() == k ? 1 : 0;
    return c;
  }
};

inline ScenarioConfig small_scenario(Protocol p, std::uint64_t seed = 1) {
  ScenarioConfig c;
  c.protocol = p;
  c.node_count = 20;
  c.field = {600.0, 600.0};
  c.duration_s = 40;
  c.speed_max = 10;
  c.pause_time_s = 1;
  c.traffic.flows = 4;
  c.traffic.start_window_s = 5;
  c.seed = seed;
  return c;
}

}  // namespace rrsim::testing
