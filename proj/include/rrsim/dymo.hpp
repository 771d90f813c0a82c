#pragma once

#include <optional>
#include <vector>

#include "rrsim/hello.hpp"
#include "rrsim/reactive_agent.hpp"
#include "rrsim/route_table.hpp"

namespace rrsim {

/// DYMO: expanding ring discovery answered only by the destination, HELLO
/// link monitoring, and a scoped RERR flood on every break of an active
/// route. No gratuitous replies, no local repair, no salvaging.
class DymoAgent : public ReactiveAgent {
 public:
  using Table = SeqRoutingTable<RouteEntry>;

  DymoAgent(Network& net, NodeId self) : ReactiveAgent(net, self), table_(&net.stats) {
    hello_.emplace(
        net, self, [this] { return on_active_route(); }, [this](NodeId n) { detect_link_break(n); });
  }

  void start() override {
    RandomSource rng = net_.rng.stream(streams::kProtocol + self_.value);
    hello_->start(SimTime::micros(static_cast<std::int64_t>(rng.uniform_int(0, params().hello.interval.us()))));
  }

  void receive(const Packet& p, NodeId from) override {
    hello_->heard(from, p.kind() == PacketKind::Hello);
    table_.offer(RouteOffer{from, from, 1, std::nullopt, lifetime_from_now()}, now());
    switch (p.kind()) {
      case PacketKind::Rreq: handle_rreq(p, from); break;
      case PacketKind::Rrep: handle_rrep(p, from); break;
      case PacketKind::Rerr: handle_rerr(p, from); break;
      case PacketKind::Hello: break;
      case PacketKind::Data: handle_data(p, from); break;
    }
  }

  void link_failed(const Packet& p, NodeId /*next_hop*/) override {
    // Breaks are found by HELLO expiry only.
    if (p.kind() == PacketKind::Data) drop(p, DropReason::LinkFailure);
    if (p.kind() == PacketKind::Rrep) net_.stats.note_rrep_dropped();
  }

  const Table& table() const { return table_; }
  std::uint32_t own_seq() const { return own_seq_; }

  void detect_link_break(NodeId lost) {
    std::vector<UnreachableDest> broken;
    table_.for_each([&](RouteEntry& e) {
      if (e.next_hop != lost || e.state != RouteState::Valid) return;
      const bool active = e.usable(now()) && e.carrying_traffic(now(), params().active_route_timeout);
      table_.invalidate(e, active);
      if (active) broken.push_back(UnreachableDest{e.destination, e.dest_seq});
    });
    if (broken.empty()) return;

    const std::uint64_t tag = net_.stats.new_tag();
    net_.stats.add_break(BreakRecord{self_, lost, now(), tag});
    Packet rerr;
    rerr.origin = self_;
    rerr.target = kBroadcast;
    rerr.ttl = params().ers.net_diameter;
    rerr.tag = tag;
    RerrHeader h;
    h.rerr_id = next_broadcast_id();
    h.unreachable = std::move(broken);
    first_sighting(self_, h.rerr_id);
    rerr.body = std::move(h);
    net_.medium.broadcast(self_, std::move(rerr));
  }

 protected:
  bool try_send_data(Packet& data) override {
    RouteEntry* e = table_.find(data.target);
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
    if (const RouteEntry* e = table_.find(dest); e && e->seq_known) {
      h.dest_seq = e->dest_seq;
      h.dest_seq_known = true;
    }
    first_sighting(self_, h.broadcast_id);
    rreq.body = std::move(h);
    net_.medium.broadcast(self_, std::move(rreq));
  }

 private:
  SimTime lifetime_from_now() const { return now() + params().active_route_timeout; }

  void forward_on(RouteEntry& e, Packet data) {
    if (!e.usable(now())) net_.stats.violation("forward_on_invalid_route");
    e.last_data_use = now();
    table_.refresh(e, lifetime_from_now());
    hello_->watch(e.next_hop);
    send_data_to(e.next_hop, std::move(data));
  }

  void handle_data(const Packet& p, NodeId from) {
    if (p.target == self_) {
      if (RouteEntry* back = table_.find(p.origin); back && back->usable(now())) table_.refresh(*back, lifetime_from_now());
      deliver_local(p);
      return;
    }
    note_data_activity();
    RouteEntry* e = table_.find(p.target);
    if (e && e->usable(now())) {
      forward_on(*e, p);
      return;
    }
    drop(p, DropReason::NoRoute);
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
    table_.offer(RouteOffer{p.origin, from, p.hop_count + 1, h.origin_seq, lifetime_from_now()}, now());
    if (p.target != self_) {
      rebroadcast(p);
      return;
    }
    own_seq_ = std::max(own_seq_, h.dest_seq_known ? h.dest_seq : 0u) + 1;
    Packet rrep;
    rrep.origin = self_;
    rrep.target = p.origin;
    rrep.ttl = params().ers.net_diameter;
    RrepHeader rh;
    rh.replier = self_;
    rh.dest_seq = own_seq_;
    rrep.body = std::move(rh);
    send_rrep(from, std::move(rrep));
  }

  void handle_rrep(const Packet& p, NodeId from) {
    const auto& h = p.as<RrepHeader>();
    if (h.replier != p.origin) net_.stats.violation("dymo_gratuitous_rrep");
    table_.offer(RouteOffer{p.origin, from, p.hop_count + 1, h.dest_seq, lifetime_from_now()}, now());
    const RouteEntry* fwd = table_.find(p.origin);
    if (p.target == self_) {
      if (fwd && fwd->usable(now())) route_discovered(p.origin);
      return;
    }
    RouteEntry* back = table_.find(p.target);
    if (!back || !back->usable(now())) {
      net_.stats.note_rrep_dropped();
      return;
    }
    Packet out = p;
    ++out.hop_count;
    net_.medium.unicast(self_, back->next_hop, std::move(out));
  }

  void handle_rerr(const Packet& p, NodeId from) {
    const auto& h = p.as<RerrHeader>();
    const bool flood = p.target.is_broadcast();
    if (flood && !first_sighting(p.origin, h.rerr_id)) return;
    for (const UnreachableDest& u : h.unreachable) {
      RouteEntry* e = table_.find(u.dest);
      if (!e || e->state == RouteState::Invalid) continue;
      if (!flood && e->next_hop != from) continue;
      if (flood && e->seq_known && e->dest_seq > u.seq) continue;
      table_.invalidate(*e, false);
      table_.raise_seq(*e, u.seq);
      if (is_source_for(u.dest) && send_buffer().has(u.dest)) request_route(u.dest);
    }
    if (flood) rebroadcast(p);
  }

  Table table_;
  std::uint32_t own_seq_ = 0;
  std::optional<HelloMonitor> hello_;
};

}  // namespace rrsim
