#pragma once

#include <map>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "rrsim/aodv.hpp"
#include "rrsim/cost_model.hpp"
#include "rrsim/dsr.hpp"
#include "rrsim/dymo.hpp"
#include "rrsim/ring_oracle.hpp"
#include "rrsim/scenario.hpp"

namespace rrsim {

struct Flow {
  NodeId source;
  NodeId dest;
  SimTime start;
};

struct RunOutcome {
  ScenarioConfig config;
  MetricsReport metrics;
  cost::CostReport cost;
  RunStats stats;
  std::vector<Flow> flows;
};

inline void install_protocol(Network& net, Protocol p) {
  switch (p) {
    case Protocol::Aodv: net.install<AodvAgent>(LinkMonitoring::Hello); break;
    case Protocol::AodvLl: net.install<AodvAgent>(LinkMonitoring::LinkLayer); break;
    case Protocol::Dsr: net.install<DsrAgent>(net.params.dsr_cache_capacity); break;
    case Protocol::DsrM: net.install<DsrAgent>(net.params.dsr_m_cache_capacity); break;
    case Protocol::Dymo: net.install<DymoAgent>(); break;
  }
}

/// Distinct ordered (source, dest) pairs, source != dest, drawn uniformly
/// without replacement; start times uniform in the start window.
inline std::vector<Flow> draw_flows(const ScenarioConfig& cfg, RandomSource rng) {
  const auto n = static_cast<std::uint64_t>(cfg.node_count);
  std::set<std::pair<std::uint32_t, std::uint32_t>> used;
  std::vector<Flow> flows;
  while (flows.size() < static_cast<std::size_t>(cfg.traffic.flows)) {
    const auto s = static_cast<std::uint32_t>(rng.uniform_int(0, n));
    auto d = static_cast<std::uint32_t>(rng.uniform_int(0, n - 1));
    if (d >= s) ++d;
    if (!used.emplace(s, d).second) continue;
    const SimTime start =
        cfg.traffic.start_window_s > 0 ? SimTime::seconds(rng.uniform(0.0, cfg.traffic.start_window_s)) : SimTime::zero();
    flows.push_back(Flow{NodeId(s), NodeId(d), start});
  }
  return flows;
}

/// Constant-bit-rate sources feeding the routing agents.
class CbrTraffic {
 public:
  CbrTraffic(Network& net, const TrafficConfig& cfg, SimTime stop) : net_(net), cfg_(cfg), stop_(stop) {}

  void add(const Flow& f) {
    if (f.start < stop_) net_.sim.schedule(f.start, [this, f] { emit(f); });
  }

 private:
  void emit(const Flow& f) {
    Packet p;
    p.origin = f.source;
    p.target = f.dest;
    p.ttl = net_.params.data_ttl;
    DataHeader h;
    h.uid = ++uid_;
    h.payload_bytes = cfg_.payload_bytes;
    h.originated_at = net_.now();
    p.body = std::move(h);
    net_.metrics.record_originated(uid_);
    net_.agent(f.source).originate(std::move(p));
    const SimTime next = net_.now() + SimTime::seconds(1.0 / cfg_.rate_pps);
    if (next < stop_) net_.sim.schedule(next, [this, f] { emit(f); });
  }

  Network& net_;
  TrafficConfig cfg_;
  SimTime stop_;
  std::uint64_t uid_ = 0;
};

inline Graph snapshot_graph(Network& net, SimTime t) {
  std::vector<Vec2> pos;
  pos.reserve(net.size());
  for (std::uint32_t i = 0; i < net.size(); ++i) pos.push_back(net.mobility().position_at(NodeId(i), t));
  return Graph::unit_disk(pos, net.medium.radio().range_m);
}

/// Analytical cost columns from what the run actually did: discovery rings
/// sized on the topology at discovery time, breaks with their repair and
/// RERR reach, salvage positions and time spent on active routes.
inline cost::CostReport assess_costs(Network& net, const ScenarioConfig& cfg) {
  using cost::Cost;
  const SimTime end = cfg.duration();
  const cost::Reading reading = cfg.literal_formulas ? cost::Reading::Literal : cost::Reading::Gated;

  Cost degree_sum = 0;
  std::int64_t samples = 0;
  const SimTime step = SimTime::seconds(cfg.snapshot_interval_s);
  for (SimTime t = SimTime::zero(); t < end; t += step) {
    degree_sum += snapshot_graph(net, t).average_degree();
    ++samples;
  }
  const Cost d_avg = samples ? degree_sum / samples : Cost(0);

  std::map<std::int64_t, Graph> graphs;
  Cost ring_terms = 0;
  for (const DiscoveryRecord& d : net.stats.discoveries()) {
    auto it = graphs.find(d.started.us());
    if (it == graphs.end()) it = graphs.emplace(d.started.us(), snapshot_graph(net, d.started)).first;
    std::vector<std::int64_t> rings;
    for (int ttl : d.ring_ttls) rings.push_back(it->second.reach_within(d.source.value, ttl));
    ring_terms += cost::ce_rd(1, rings);
  }

  cost::CostReport r;
  r.ce_rd = d_avg * ring_terms;

  Cost hello = 0;
  const Cost interval(net.params.hello.interval.us(), 1'000'000);
  for (std::uint32_t i = 0; i < net.size(); ++i) {
    hello += cost::ce_hello(Cost(net.stats.active_time(NodeId(i), end).us(), 1'000'000), interval, 1);
  }

  switch (cfg.protocol) {
    case Protocol::Aodv:
    case Protocol::AodvLl: {
      const bool monitors = cfg.protocol == Protocol::Aodv;
      r.ce_rm = monitors ? hello : Cost(0);
      for (const BreakRecord& b : net.stats.breaks()) {
        cost::CostParams p;
        p.lb_rn = p.lb_ar = 1;
        p.n_llr = b.repair_attempted ? static_cast<std::int64_t>(net.stats.repair_reach(b.tag)) : 0;
        p.p_us_llr = !b.repair_attempted || b.repair_failed ? 1 : 0;
        p.n_rerr = static_cast<std::int64_t>(net.stats.rerr_reach(b.tag));
        r.ce_rm += monitors ? cost::ce_rm_aodv(p, reading) : cost::ce_rm_aodv_ll(p, reading);
      }
      break;
    }
    case Protocol::Dsr:
    case Protocol::DsrM:
      for (const SalvageRecord& s : net.stats.salvages()) {
        if (s.success) r.ce_rm += cost::ce_rm_dsr(static_cast<std::int64_t>(s.route_position));
      }
      break;
    case Protocol::Dymo: {
      r.ce_rm = hello;
      for (const BreakRecord& b : net.stats.breaks()) {
        cost::CostParams p;
        p.lb_ar = 1;
        p.n_rerr = static_cast<std::int64_t>(net.stats.rerr_reach(b.tag));
        r.ce_rm += cost::ce_rm_dymo(p);
      }
      break;
    }
  }
  return r;
}

inline std::unique_ptr<MobilityModel> make_mobility(const ScenarioConfig& cfg, const RandomSource& root,
                                                    const std::vector<Vec2>* placement) {
  if (placement) {
    if (placement->size() != static_cast<std::size_t>(cfg.node_count)) {
      throw ConfigError("scenario.placement", "placement lists " + std::to_string(placement->size()) +
                                                  " nodes but scenario.nodes is " + std::to_string(cfg.node_count));
    }
    return std::make_unique<KeyframeMobility>(KeyframeMobility::fixed(*placement));
  }
  return std::make_unique<RandomWaypointMobility>(static_cast<std::size_t>(cfg.node_count), cfg.waypoint(), root);
}

/// One complete simulation. `placement` overrides random waypoint with fixed
/// positions; otherwise cfg.placement_file is honoured if set.
inline RunOutcome run_scenario(const ScenarioConfig& cfg, const std::vector<Vec2>* placement = nullptr,
                               ProtocolParams params = {}) {
  cfg.validate();
  std::vector<Vec2> loaded;
  if (!placement && !cfg.placement_file.empty()) {
    loaded = load_placement(cfg.placement_file);
    placement = &loaded;
  }
  params.ers = cfg.ers;
  const RandomSource root(cfg.seed);
  Network net(make_mobility(cfg, root, placement), cfg.radio, params, cfg.seed);
  install_protocol(net, cfg.protocol);

  RunOutcome out;
  out.config = cfg;
  out.flows = draw_flows(cfg, root.stream(streams::kTraffic));
  CbrTraffic traffic(net, cfg.traffic, cfg.duration());
  for (const Flow& f : out.flows) traffic.add(f);

  net.sim.run(cfg.duration());
  out.metrics = net.metrics.finalize(cfg.duration());
  out.cost = assess_costs(net, cfg);
  out.stats = net.stats;
  return out;
}

}  // namespace rrsim
