#pragma once

#include <algorithm>
#include <vector>
#include <optional>
#include <utility>

#include "rrsim/reactive_agent.hpp"
#include "rrsim/route_cache.hpp"

namespace rrsim {

/// DSR: source routing from a bounded path cache, gratuitous replies from
/// cache, packet salvaging on link-layer failure, and broken links carried
/// on the next RREQ. DSR-M is the same agent with a smaller cache.
class DsrAgent : public ReactiveAgent {
 public:
  DsrAgent(Network& net, NodeId self, std::size_t cache_capacity) : ReactiveAgent(net, self), cache_(cache_capacity) {}

  void receive(const Packet& p, NodeId from) override {
    switch (p.kind()) {
      case PacketKind::Rreq: handle_rreq(p, from); break;
      case PacketKind::Rrep: handle_rrep(p); break;
      case PacketKind::Rerr: handle_rerr(p); break;
      case PacketKind::Hello: break;
      case PacketKind::Data: handle_data(p); break;
    }
  }

  void link_failed(const Packet& p, NodeId next_hop) override {
    cache_.remove_link(Link{self_, next_hop});
    if (p.kind() == PacketKind::Rrep) {
      net_.stats.note_rrep_dropped();
      return;
    }
    if (p.kind() != PacketKind::Data) return;

    Packet data = p;
    auto& h = data.as<DataHeader>();
    const std::size_t holder = h.route_index - 1;
    if (holder == 0) {
      // Our own packet: pick another cached route or rediscover.
      pending_rerr_.push_back(Link{self_, next_hop});
      if (!try_send_data(data)) queue_for_route(std::move(data));
      return;
    }
    salvage(std::move(data), holder, next_hop);
  }

  const RouteCache& cache() const { return cache_; }
  const std::vector<Link>& pending_piggyback() const { return pending_rerr_; }

 protected:
  bool try_send_data(Packet& data) override {
    auto found = lookup(data.target);
    if (!found.route) return false;
    auto& h = data.as<DataHeader>();
    h.source_route = std::move(*found.route);
    h.route_index = 0;
    send_after_scan(std::move(data), found.scanned);
    return true;
  }

  void send_route_request(NodeId dest, int ttl) override {
    Packet rreq;
    rreq.origin = self_;
    rreq.target = dest;
    rreq.ttl = ttl;
    RreqHeader h;
    h.broadcast_id = next_broadcast_id();
    h.path = {self_};
    h.piggyback_rerr = std::exchange(pending_rerr_, {});
    first_sighting(self_, h.broadcast_id);
    rreq.body = std::move(h);
    net_.medium.broadcast(self_, std::move(rreq));
  }

 private:
  RouteCache::Lookup lookup(NodeId dest) const { return cache_.find(dest); }

  void learn(Path p) {
    cache_.insert(std::move(p));
    net_.stats.note_cache_size(cache_.size());
    if (cache_.size() > cache_.capacity()) net_.stats.violation("cache_over_capacity");
  }

  // Everything reachable along `route` from our position, both directions.
  void learn_route(const Path& route, std::size_t at) {
    if (at + 1 < route.size()) learn(Path(route.begin() + static_cast<std::ptrdiff_t>(at), route.end()));
    if (at > 0) {
      Path back(route.begin(), route.begin() + static_cast<std::ptrdiff_t>(at + 1));
      std::reverse(back.begin(), back.end());
      learn(std::move(back));
    }
  }

  void send_after_scan(Packet data, std::size_t scanned) {
    const SimTime delay = params().cache_scan_per_entry * static_cast<std::int64_t>(scanned);
    if (delay <= SimTime::zero()) {
      forward(std::move(data));
      return;
    }
    net_.sim.schedule_in(delay, [this, data]() mutable { forward(std::move(data)); });
  }

  void forward(Packet data) {
    auto& h = data.as<DataHeader>();
    const NodeId next = h.source_route.at(h.route_index + 1);
    ++h.route_index;
    send_data_to(next, std::move(data));
  }

  void handle_data(const Packet& p) {
    const auto& h = p.as<DataHeader>();
    if (h.route_index >= h.source_route.size() || h.source_route[h.route_index] != self_) {
      net_.stats.violation("source_route_integrity");
      drop(p, DropReason::MalformedRoute);
      return;
    }
    learn_route(h.source_route, h.route_index);
    if (h.route_index + 1 == h.source_route.size()) {
      deliver_local(p);
      return;
    }
    note_data_activity();
    forward(p);
  }

  void salvage(Packet data, std::size_t holder, NodeId broken_to) {
    auto& h = data.as<DataHeader>();
    std::optional<RouteCache::Lookup> found;
    if (h.salvage_count < params().max_salvage) {
      found = lookup(data.target);
      if (!found->route) found.reset();
    }
    if (!found) {
      net_.stats.add_salvage(SalvageRecord{self_, holder + 1, false});
      pending_rerr_.push_back(Link{self_, broken_to});
      return_error(h, holder, broken_to);
      drop(data, DropReason::LinkFailure);
      return;
    }
    ++h.salvage_count;
    if (h.salvage_count > params().max_salvage) net_.stats.violation("salvage_over_max");
    net_.stats.note_salvage_count(h.salvage_count);
    net_.stats.add_salvage(SalvageRecord{self_, holder + 1, true});

    Packet rerr;
    rerr.origin = self_;
    rerr.target = kBroadcast;
    rerr.ttl = 1;
    RerrHeader rh;
    rh.broken_link = Link{self_, broken_to};
    rh.unreachable.push_back(UnreachableDest{broken_to, 0});
    rerr.body = std::move(rh);
    net_.medium.broadcast(self_, std::move(rerr));

    h.source_route = std::move(*found->route);
    h.route_index = 0;
    send_after_scan(std::move(data), found->scanned);
  }

  void handle_rreq(const Packet& p, NodeId /*from*/) {
    const auto& h = p.as<RreqHeader>();
    if (!first_sighting(p.origin, h.broadcast_id)) return;
    for (const Link& l : h.piggyback_rerr) cache_.remove_link(l);
    if (std::find(h.path.begin(), h.path.end(), self_) != h.path.end()) return;

    Path walked = h.path;
    walked.push_back(self_);
    learn_route(walked, walked.size() - 1);

    if (p.target == self_) {
      reply(p.target, std::move(walked));
      return;
    }
    if (auto found = lookup(p.target); found.route) {
      Path full = walked;
      full.insert(full.end(), found.route->begin() + 1, found.route->end());
      if (loop_free(full)) {
        reply(p.target, std::move(full), walked.size() - 1);
        return;
      }
    }
    Packet fwd = p;
    auto& fh = fwd.as<RreqHeader>();
    fh.path = std::move(walked);
    fh.piggyback_rerr.insert(fh.piggyback_rerr.end(), pending_rerr_.begin(), pending_rerr_.end());
    if (rebroadcast(std::move(fwd))) pending_rerr_.clear();
  }

  // `full` runs requester..dest; we sit at index `at` (the end by default).
  void reply(NodeId dest, Path full, std::optional<std::size_t> at = std::nullopt) {
    const std::size_t pos = at.value_or(full.size() - 1);
    Packet rrep;
    rrep.origin = dest;
    rrep.target = full.front();
    rrep.ttl = static_cast<int>(full.size());
    RrepHeader h;
    h.replier = self_;
    h.gratuitous = self_ != dest;
    h.path_index = pos - 1;
    const NodeId next = full[pos - 1];
    h.path = std::move(full);
    rrep.body = std::move(h);
    send_rrep(next, std::move(rrep));
  }

  void handle_rrep(const Packet& p) {
    const auto& h = p.as<RrepHeader>();
    if (h.path_index >= h.path.size() || h.path[h.path_index] != self_) {
      net_.stats.violation("source_route_integrity");
      return;
    }
    learn_route(h.path, h.path_index);
    if (h.path_index == 0) {
      route_discovered(p.origin);
      return;
    }
    Packet out = p;
    auto& oh = out.as<RrepHeader>();
    --oh.path_index;
    ++out.hop_count;
    const NodeId next = oh.path[oh.path_index];
    net_.medium.unicast(self_, next, std::move(out));
  }

  // Route error travelling back along the traversed hops to the source.
  void return_error(const DataHeader& h, std::size_t holder, NodeId broken_to) {
    Packet rerr;
    rerr.origin = self_;
    rerr.target = h.source_route.front();
    rerr.ttl = static_cast<int>(holder) + 1;
    RerrHeader rh;
    rh.broken_link = Link{self_, broken_to};
    rh.return_path.assign(h.source_route.begin(), h.source_route.begin() + static_cast<std::ptrdiff_t>(holder + 1));
    rh.path_index = holder - 1;
    const NodeId next = rh.return_path[rh.path_index];
    rerr.body = std::move(rh);
    net_.medium.unicast(self_, next, std::move(rerr));
  }

  void handle_rerr(const Packet& p) {
    const auto& h = p.as<RerrHeader>();
    if (h.broken_link) cache_.remove_link(*h.broken_link);
    if (h.return_path.empty() || h.path_index >= h.return_path.size() || h.return_path[h.path_index] != self_) return;
    if (h.path_index == 0) {
      // The source spreads the news on its next route request.
      if (h.broken_link) pending_rerr_.push_back(*h.broken_link);
      return;
    }
    Packet out = p;
    auto& oh = out.as<RerrHeader>();
    --oh.path_index;
    const NodeId next = oh.return_path[oh.path_index];
    net_.medium.unicast(self_, next, std::move(out));
  }

  RouteCache cache_;
  std::vector<Link> pending_rerr_;
};

}  // namespace rrsim
