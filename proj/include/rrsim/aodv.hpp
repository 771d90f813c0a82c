#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rrsim/hello.hpp"
#include "rrsim/reactive_agent.hpp"
#include "rrsim/route_table.hpp"

namespace rrsim {

enum class LinkMonitoring {
  Hello,      // plain AODV: HELLO beacons, unicast failures go unnoticed
  LinkLayer,  // AODV-LL: link-layer feedback, no HELLO traffic
};

/// AODV with sequence-numbered routes, precursor lists, gratuitous replies,
/// local link repair (LLR) and precursor-driven RERR. The LinkLayer variant
/// replaces HELLO monitoring with link-layer failure feedback.
class AodvAgent : public ReactiveAgent {
 public:
  using Table = SeqRoutingTable<AodvRouteEntry>;

  AodvAgent(Network& net, NodeId self, LinkMonitoring mode)
      : ReactiveAgent(net, self), mode_(mode), table_(&net.stats) {
    if (mode_ == LinkMonitoring::Hello) {
      hello_.emplace(
          net, self, [this] { return on_active_route(); }, [this](NodeId n) { detect_link_break(n); });
    }
  }

  void start() override {
    if (hello_) {
      RandomSource rng = net_.rng.stream(streams::kProtocol + self_.value);
      hello_->start(SimTime::micros(static_cast<std::int64_t>(rng.uniform_int(0, params().hello.interval.us()))));
    }
  }

  void receive(const Packet& p, NodeId from) override {
    note_neighbor(from, p.kind() == PacketKind::Hello);
    switch (p.kind()) {
      case PacketKind::Rreq: handle_rreq(p, from); break;
      case PacketKind::Rrep: handle_rrep(p, from); break;
      case PacketKind::Rerr: handle_rerr(p, from); break;
      case PacketKind::Hello: break;
      case PacketKind::Data: handle_data(p, from); break;
    }
  }

  void link_failed(const Packet& p, NodeId next_hop) override {
    if (mode_ == LinkMonitoring::Hello) {
      // Without link-layer feedback the failure is invisible to routing.
      if (p.kind() == PacketKind::Data) drop(p, DropReason::LinkFailure);
      if (p.kind() == PacketKind::Rrep) net_.stats.note_rrep_dropped();
      return;
    }
    if (p.kind() == PacketKind::Rrep) net_.stats.note_rrep_dropped();
    LinkProbe& probe = probe_link(next_hop);
    if (p.kind() == PacketKind::Data) probe.held.push_back(p);
  }

  const Table& table() const { return table_; }
  std::uint32_t own_seq() const { return own_seq_; }
  bool repairing(NodeId dest) const { return repairs_.contains(dest); }
  LinkMonitoring mode() const { return mode_; }

  /// Entry point for link-break detection (HELLO expiry or link-layer verdict).
  void detect_link_break(NodeId lost) {
    std::vector<NodeId> active;
    table_.for_each([&](AodvRouteEntry& e) {
      if (e.next_hop != lost || e.state != RouteState::Valid) return;
      if (e.usable(now()) && e.carrying_traffic(now(), params().active_route_timeout)) {
        active.push_back(e.destination);
      } else {
        table_.invalidate(e, false);
      }
    });
    if (active.empty()) return;

    const std::uint64_t tag = net_.stats.new_tag();
    BreakRecord& rec = net_.stats.add_break(BreakRecord{self_, lost, now(), tag});
    for (NodeId dest : active) {
      AodvRouteEntry& e = *table_.find(dest);
      if (is_source_for(dest)) {
        // The source re-discovers instead of repairing locally.
        table_.invalidate(e, true);
        notify_precursors(e, tag);
        if (send_buffer().has(dest)) request_route(dest);
        continue;
      }
      rec.repair_attempted = true;
      start_local_repair(e, tag);
    }
  }

 protected:
  bool try_send_data(Packet& data) override {
    AodvRouteEntry* e = table_.find(data.target);
    if (!e || !e->usable(now())) return false;
    forward_on(*e, std::move(data));
    return true;
  }

  void send_route_request(NodeId dest, int ttl) override {
    Packet rreq;
    rreq.origin = self_;
    rreq.target = dest;
    rreq.ttl = ttl;
    RreqHeader h;
    h.broadcast_id = next_broadcast_id();
    h.origin_seq = ++own_seq_;
    if (const AodvRouteEntry* e = table_.find(dest); e && e->seq_known) {
      h.dest_seq = e->dest_seq;
      h.dest_seq_known = true;
    }
    first_sighting(self_, h.broadcast_id);
    rreq.body = std::move(h);
    net_.medium.broadcast(self_, std::move(rreq));
  }

  bool route_pending(NodeId dest) const override { return discovery_active(dest) || repairs_.contains(dest); }

 private:
  struct Repair {
    std::uint64_t tag = 0;
    EventHandle timer;
  };
  struct LinkProbe {
    SimTime last_traffic;
    int failures = 0;
    std::vector<Packet> held;  // sent into the break, waiting for the verdict
  };

  SimTime lifetime_from_now() const { return now() + params().active_route_timeout; }

  void note_neighbor(NodeId from, bool is_hello) {
    if (hello_) hello_->heard(from, is_hello);
    table_.offer(RouteOffer{from, from, 1, std::nullopt, lifetime_from_now()}, now());
  }

  void forward_on(AodvRouteEntry& e, Packet data) {
    if (!e.usable(now())) net_.stats.violation("forward_on_invalid_route");
    e.last_data_use = now();
    table_.refresh(e, lifetime_from_now());
    if (AodvRouteEntry* hop = table_.find(e.next_hop); hop && hop->usable(now())) table_.refresh(*hop, lifetime_from_now());
    if (hello_) hello_->watch(e.next_hop);
    if (mode_ == LinkMonitoring::LinkLayer) probe_link(e.next_hop).last_traffic = now();
    send_data_to(e.next_hop, std::move(data));
  }

  void handle_data(const Packet& p, NodeId from) {
    if (p.target == self_) {
      if (AodvRouteEntry* back = table_.find(p.origin); back && back->usable(now())) table_.refresh(*back, lifetime_from_now());
      deliver_local(p);
      return;
    }
    note_data_activity();
    AodvRouteEntry* e = table_.find(p.target);
    if (e && e->usable(now())) {
      forward_on(*e, p);
      return;
    }
    if (repairs_.contains(p.target)) {
      buffer_data(p);
      return;
    }
    drop(p, DropReason::NoRoute);
    // Tell the previous hop its route through us is gone.
    Packet rerr;
    rerr.origin = self_;
    rerr.target = from;
    RerrHeader h;
    h.unreachable.push_back(UnreachableDest{p.target, e ? e->dest_seq : 0});
    rerr.body = std::move(h);
    net_.medium.unicast(self_, from, std::move(rerr));
  }

  void handle_rreq(const Packet& p, NodeId from) {
    const auto& h = p.as<RreqHeader>();
    if (!first_sighting(p.origin, h.broadcast_id)) return;
    const int distance = p.hop_count + 1;
    table_.offer(RouteOffer{p.origin, from, distance, h.origin_seq, lifetime_from_now()}, now());

    if (p.target == self_) {
      own_seq_ = std::max(own_seq_, h.dest_seq_known ? h.dest_seq : 0u) + 1;
      reply(p, from, self_, own_seq_, 0, false);
      return;
    }
    AodvRouteEntry* e = table_.find(p.target);
    if (e && e->usable(now()) && e->seq_known && e->next_hop != from &&
        (!h.dest_seq_known || e->dest_seq >= h.dest_seq)) {
      e->precursors.insert(from);
      if (AodvRouteEntry* back = table_.find(p.origin)) back->precursors.insert(e->next_hop);
      reply(p, from, self_, e->dest_seq, e->hop_count, true);
      return;
    }
    Packet fwd = p;
    if (e && e->seq_known) {
      auto& fh = fwd.as<RreqHeader>();
      if (!fh.dest_seq_known || e->dest_seq > fh.dest_seq) {
        fh.dest_seq = e->dest_seq;
        fh.dest_seq_known = true;
      }
    }
    rebroadcast(std::move(fwd));
  }

  void reply(const Packet& rreq, NodeId via, NodeId replier, std::uint32_t seq, int hops, bool gratuitous) {
    Packet rrep;
    rrep.origin = rreq.target;
    rrep.target = rreq.origin;
    rrep.hop_count = hops;
    rrep.ttl = params().ers.net_diameter;
    RrepHeader h;
    h.replier = replier;
    h.dest_seq = seq;
    h.gratuitous = gratuitous;
    rrep.body = std::move(h);
    send_rrep(via, std::move(rrep));
  }

  void handle_rrep(const Packet& p, NodeId from) {
    const auto& h = p.as<RrepHeader>();
    const NodeId dest = p.origin;
    table_.offer(RouteOffer{dest, from, p.hop_count + 1, h.dest_seq, lifetime_from_now()}, now());
    AodvRouteEntry* fwd = table_.find(dest);

    if (p.target == self_) {
      if (!fwd || !fwd->usable(now())) return;
      if (repairs_.contains(dest)) {
        finish_repair(dest, true);
      } else {
        route_discovered(dest);
      }
      return;
    }
    AodvRouteEntry* back = table_.find(p.target);
    if (!back || !back->usable(now())) {
      net_.stats.note_rrep_dropped();
      return;
    }
    if (fwd) fwd->precursors.insert(back->next_hop);
    back->precursors.insert(from);
    Packet out = p;
    ++out.hop_count;
    net_.medium.unicast(self_, back->next_hop, std::move(out));
  }

  void handle_rerr(const Packet& p, NodeId from) {
    const auto& h = p.as<RerrHeader>();
    std::vector<UnreachableDest> onward;
    std::set<NodeId> notify;
    for (const UnreachableDest& u : h.unreachable) {
      AodvRouteEntry* e = table_.find(u.dest);
      if (!e || e->next_hop != from || e->state == RouteState::Invalid) continue;
      if (repairs_.contains(u.dest)) continue;
      table_.invalidate(*e, false);
      table_.raise_seq(*e, u.seq);
      onward.push_back(UnreachableDest{u.dest, e->dest_seq});
      notify.insert(e->precursors.begin(), e->precursors.end());
      e->precursors.clear();
      if (is_source_for(u.dest) && send_buffer().has(u.dest)) request_route(u.dest);
    }
    if (!onward.empty() && !notify.empty()) send_rerr(std::move(onward), notify, p.tag);
  }

  void start_local_repair(AodvRouteEntry& e, std::uint64_t tag) {
    e.state = RouteState::UnderRepair;
    const int ttl = std::max(2, e.hop_count / 2 + 1);
    Packet rreq;
    rreq.origin = self_;
    rreq.target = e.destination;
    rreq.ttl = ttl;
    rreq.tag = tag;
    RreqHeader h;
    h.broadcast_id = next_broadcast_id();
    h.origin_seq = ++own_seq_;
    h.dest_seq = e.dest_seq + 1;
    h.dest_seq_known = true;
    h.local_repair = true;
    first_sighting(self_, h.broadcast_id);
    rreq.body = std::move(h);

    const NodeId dest = e.destination;
    Repair& r = repairs_[dest];
    r.tag = tag;
    r.timer = net_.sim.schedule_in(params().ers.ring_timeout(ttl, rreq_hop_delay()), [this, dest] { finish_repair(dest, false); });
    net_.medium.broadcast(self_, std::move(rreq));
  }

  void finish_repair(NodeId dest, bool success) {
    auto it = repairs_.find(dest);
    if (it == repairs_.end()) return;
    const std::uint64_t tag = it->second.tag;
    net_.sim.cancel(it->second.timer);
    repairs_.erase(it);
    if (success) {
      flush_buffer(dest);
      return;
    }
    AodvRouteEntry* e = table_.find(dest);
    if (e && e->usable(now())) {
      // Revalidated by a reply that arrived through another path.
      flush_buffer(dest);
      return;
    }
    if (BreakRecord* rec = net_.stats.find_break(tag)) rec->repair_failed = true;
    if (e) {
      table_.invalidate(*e, true);
      notify_precursors(*e, tag);
    }
    drop_buffered(dest, DropReason::NoRoute);
  }

  void notify_precursors(AodvRouteEntry& e, std::uint64_t tag) {
    if (e.precursors.empty()) return;
    send_rerr({UnreachableDest{e.destination, e.dest_seq}}, e.precursors, tag);
    e.precursors.clear();
  }

  // Unicast to a small precursor set, one broadcast otherwise.
  void send_rerr(std::vector<UnreachableDest> unreachable, const std::set<NodeId>& precursors, std::uint64_t tag) {
    Packet rerr;
    rerr.origin = self_;
    rerr.ttl = 1;
    rerr.tag = tag;
    RerrHeader h;
    h.unreachable = std::move(unreachable);
    rerr.body = std::move(h);
    if (precursors.size() <= 2) {
      for (NodeId n : precursors) {
        Packet copy = rerr;
        copy.target = n;
        net_.medium.unicast(self_, n, std::move(copy));
      }
    } else {
      rerr.target = kBroadcast;
      net_.medium.broadcast(self_, std::move(rerr));
    }
  }

  // AODV-LL: next hops under traffic are probed at a fixed rate and
  // declared broken after a run of consecutive probe failures.
  LinkProbe& probe_link(NodeId hop) {
    auto [it, fresh] = probes_.try_emplace(hop);
    if (fresh) it->second.last_traffic = now();
    if (!net_.sim.is_pending(probe_timer_)) {
      probe_timer_ = net_.sim.schedule_in(params().ll_probe_interval, [this] { probe_tick(); });
    }
    return it->second;
  }

  void probe_tick() {
    std::vector<NodeId> broken;
    for (auto it = probes_.begin(); it != probes_.end();) {
      LinkProbe& pr = it->second;
      if (pr.held.empty() && now() > pr.last_traffic + params().ll_traffic_window) {
        it = probes_.erase(it);
        continue;
      }
      pr.failures = net_.medium.in_range(self_, it->first, now()) ? 0 : pr.failures + 1;
      if (pr.failures >= params().ll_probe_failures) broken.push_back(it->first);
      ++it;
    }
    for (NodeId hop : broken) link_layer_verdict(hop);
    if (!probes_.empty() && !net_.sim.is_pending(probe_timer_)) {
      probe_timer_ = net_.sim.schedule_in(params().ll_probe_interval, [this] { probe_tick(); });
    }
  }

  void link_layer_verdict(NodeId hop) {
    auto it = probes_.find(hop);
    if (it == probes_.end()) return;
    std::vector<Packet> held = std::move(it->second.held);
    probes_.erase(it);
    detect_link_break(hop);
    for (Packet& p : held) {
      if (try_send_data(p)) continue;
      if (route_pending(p.target)) {
        buffer_data(std::move(p));
      } else if (is_source_for(p.target)) {
        queue_for_route(std::move(p));
      } else {
        drop(p, DropReason::LinkFailure);
      }
    }
  }

  LinkMonitoring mode_;
  Table table_;
  std::uint32_t own_seq_ = 0;
  std::map<NodeId, Repair> repairs_;
  std::map<NodeId, LinkProbe> probes_;
  EventHandle probe_timer_;
  std::optional<HelloMonitor> hello_;
};

}  // namespace rrsim
