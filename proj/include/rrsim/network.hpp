#pragma once

#include <memory>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "rrsim/ers.hpp"
#include "rrsim/medium.hpp"
#include "rrsim/metrics.hpp"
#include "rrsim/mobility.hpp"
#include "rrsim/random.hpp"
#include "rrsim/run_stats.hpp"
#include "rrsim/send_buffer.hpp"
#include "rrsim/simulator.hpp"

namespace rrsim {

enum class Protocol { Aodv, AodvLl, Dsr, DsrM, Dymo };

constexpr std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Aodv: return "aodv";
    case Protocol::AodvLl: return "aodv_ll";
    case Protocol::Dsr: return "dsr";
    case Protocol::DsrM: return "dsr_m";
    case Protocol::Dymo: return "dymo";
  }
  return "?";
}

inline Protocol parse_protocol(std::string_view s) {
  for (Protocol p : {Protocol::Aodv, Protocol::AodvLl, Protocol::Dsr, Protocol::DsrM, Protocol::Dymo}) {
    if (s == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown protocol '" + std::string(s) + "' (expected aodv, aodv_ll, dsr, dsr_m, dymo)");
}

struct HelloConfig {
  SimTime interval = SimTime::whole_seconds(1);
  int allowed_loss = 2;
  SimTime silence_limit() const { return interval * allowed_loss; }
};

struct ProtocolParams {
  ErsSchedule ers;
  SendBufferConfig buffer;
  HelloConfig hello;
  SimTime active_route_timeout = SimTime::whole_seconds(10);
  // AODV-LL link-layer probing of next hops that carry traffic.
  SimTime ll_probe_interval = SimTime::millis(10);
  int ll_probe_failures = 8;
  SimTime ll_traffic_window = SimTime::whole_seconds(1);
  std::size_t dsr_cache_capacity = 1024;
  std::size_t dsr_m_cache_capacity = 256;
  int max_salvage = 15;
  SimTime cache_scan_per_entry = SimTime::micros(1);
  int data_ttl = 64;
};

class RoutingAgent {
 public:
  virtual ~RoutingAgent() = default;
  virtual NodeId id() const = 0;
  virtual void start() {}
  /// Application hands over a freshly originated DATA packet.
  virtual void originate(Packet data) = 0;
  virtual void receive(const Packet& p, NodeId from) = 0;
  /// The medium could not deliver a unicast to `next_hop`.
  virtual void link_failed(const Packet& p, NodeId next_hop) = 0;
};

/// Everything one simulation run owns: clock, mobility, medium, metrics,
/// protocol statistics and the per-node agents. Runs share nothing.
class Network {
 public:
  Network(std::unique_ptr<MobilityModel> mobility, RadioModel radio, ProtocolParams params, std::uint64_t seed,
          PacketSizes sizes = {})
      : mobility_(std::move(mobility)),
        medium(sim, *mobility_, radio, sizes),
        stats(mobility_->size(), params.active_route_timeout),
        params(params),
        rng(seed) {
    params.ers.validate();
    medium.set_transmit_observer([this](NodeId, const Packet& p) { metrics.record_transmission(p); });
    medium.add_delivery_observer([this](NodeId from, NodeId to, const Packet& p) { stats.observe_delivery(from, to, p); });
  }

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  std::size_t size() const { return mobility_->size(); }
  MobilityModel& mobility() { return *mobility_; }

  template <typename Agent, typename... Args>
  void install(const Args&... args) {
    agents_.clear();
    for (std::uint32_t i = 0; i < size(); ++i) {
      agents_.push_back(std::make_unique<Agent>(*this, NodeId(i), args...));
    }
    for (auto& a : agents_) {
      RoutingAgent* agent = a.get();
      medium.attach(
          agent->id(), [agent](const Packet& p, NodeId from) { agent->receive(p, from); },
          [agent](const Packet& p, NodeId hop) { agent->link_failed(p, hop); });
    }
    for (auto& a : agents_) a->start();
  }

  RoutingAgent& agent(NodeId n) { return *agents_.at(n.value); }
  template <typename Agent>
  Agent& agent_as(NodeId n) {
    return dynamic_cast<Agent&>(*agents_.at(n.value));
  }

  SimTime now() const { return sim.now(); }

 private:
  std::unique_ptr<MobilityModel> mobility_;

 public:
  Simulator sim;
  Medium medium;
  Metrics metrics;
  RunStats stats;
  ProtocolParams params;
  RandomSource rng;

 private:
  std::vector<std::unique_ptr<RoutingAgent>> agents_;
};

}  // namespace rrsim
