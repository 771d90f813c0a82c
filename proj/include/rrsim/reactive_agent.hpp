#pragma once

#include <map>
#include <unordered_set>

#include "rrsim/network.hpp"

namespace rrsim {

/// Machinery shared by every reactive protocol: the send buffer for DATA
/// awaiting a route, expanding ring search bookkeeping, duplicate
/// suppression for floods, TTL-scoped rebroadcast and local delivery.
/// Subclasses supply the routing state and the per-packet handlers.
class ReactiveAgent : public RoutingAgent {
 public:
  ReactiveAgent(Network& net, NodeId self) : net_(net), self_(self), buffer_(net.params.buffer) {}

  NodeId id() const override { return self_; }

  void originate(Packet data) override {
    note_data_activity();
    if (data.target == self_) {
      deliver_local(data);
      return;
    }
    own_destinations_.insert(data.target);
    if (!try_send_data(data)) queue_for_route(std::move(data));
  }

  bool discovery_active(NodeId dest) const { return discoveries_.contains(dest); }
  const SendBuffer& send_buffer() const { return buffer_; }

 protected:
  /// Send along an existing route. Returns false, leaving `data` untouched,
  /// when no usable route exists.
  virtual bool try_send_data(Packet& data) = 0;
  virtual void send_route_request(NodeId dest, int ttl) = 0;
  /// True while something (discovery, repair) will eventually flush `dest`.
  virtual bool route_pending(NodeId dest) const { return discoveries_.contains(dest); }

  SimTime now() const { return net_.now(); }
  const ProtocolParams& params() const { return net_.params; }

  void queue_for_route(Packet data) {
    const NodeId dest = data.target;
    buffer_data(std::move(data));
    if (!route_pending(dest)) request_route(dest);
  }

  void buffer_data(Packet data) {
    if (auto evicted = buffer_.push(std::move(data), now())) drop(*evicted, DropReason::BufferOverflow);
    arm_buffer_purge();
  }

  void request_route(NodeId dest) {
    if (discoveries_.contains(dest)) return;
    Discovery& d = discoveries_[dest];
    d.record = net_.stats.begin_discovery(self_, dest, now());
    issue_ring(dest);
  }

  /// A route to `dest` was installed by a reply; ends the discovery and
  /// releases buffered packets in FIFO order.
  void route_discovered(NodeId dest) {
    if (auto it = discoveries_.find(dest); it != discoveries_.end()) {
      net_.sim.cancel(it->second.timer);
      net_.stats.discovery(it->second.record).succeeded = true;
      discoveries_.erase(it);
    }
    flush_buffer(dest);
  }

  void flush_buffer(NodeId dest) {
    for (Packet& p : buffer_.take(dest)) {
      if (!try_send_data(p)) queue_for_route(std::move(p));
    }
  }

  void drop_buffered(NodeId dest, DropReason reason) {
    for (const Packet& p : buffer_.take(dest)) drop(p, reason);
  }

  void deliver_local(const Packet& data) {
    note_data_activity();
    const auto& h = data.as<DataHeader>();
    net_.metrics.record_delivered(h.uid, now() - h.originated_at, h.payload_bytes);
  }

  void drop(const Packet& data, DropReason reason) { net_.metrics.record_dropped(data.as<DataHeader>().uid, reason); }

  /// Unicast DATA to a neighbor, consuming one hop of its TTL.
  void send_data_to(NodeId next_hop, Packet data) {
    if (data.ttl <= 0) {
      drop(data, DropReason::TtlExpired);
      return;
    }
    --data.ttl;
    note_data_activity();
    net_.medium.unicast(self_, next_hop, std::move(data));
  }

  /// Records (origin, id) and reports whether it is new.
  bool first_sighting(NodeId origin, std::uint32_t id) {
    return seen_.insert((static_cast<std::uint64_t>(origin.value) << 32) | id).second;
  }

  std::uint32_t next_broadcast_id() { return ++broadcast_id_; }

  /// Re-broadcast a received flood packet one hop further. The receiver
  /// spends one unit of TTL; nothing is sent once the budget reaches zero.
  bool rebroadcast(Packet p) {
    if (p.ttl - 1 <= 0) return false;
    --p.ttl;
    ++p.hop_count;
    net_.medium.broadcast(self_, std::move(p));
    return true;
  }

  void send_rrep(NodeId next_hop, Packet rrep) {
    const auto& h = rrep.as<RrepHeader>();
    net_.stats.note_rrep_originated(h.replier != rrep.origin);
    net_.medium.unicast(self_, next_hop, std::move(rrep));
  }

  void note_data_activity() {
    last_data_activity_ = now();
    net_.stats.note_data_activity(self_, now());
  }
  bool on_active_route() const {
    return last_data_activity_ && now() <= *last_data_activity_ + params().active_route_timeout;
  }
  bool is_source_for(NodeId dest) const { return own_destinations_.contains(dest); }

  SimTime rreq_hop_delay() const { return net_.medium.radio().hop_delay(net_.medium.sizes().rreq); }

  Network& net_;
  NodeId self_;

 private:
  struct Discovery {
    ErsAttemptState ers;
    EventHandle timer;
    std::size_t record = 0;
  };

  void issue_ring(NodeId dest) {
    auto it = discoveries_.find(dest);
    if (it == discoveries_.end()) return;
    Discovery& d = it->second;
    const auto ttl = ers_next_ttl(params().ers, d.ers);
    if (!ttl) {
      net_.stats.discovery(d.record).exhausted = true;
      discoveries_.erase(it);
      drop_buffered(dest, DropReason::NoRoute);
      return;
    }
    net_.stats.discovery(d.record).ring_ttls.push_back(*ttl);
    d.timer = net_.sim.schedule_in(params().ers.ring_timeout(*ttl, rreq_hop_delay()), [this, dest] { issue_ring(dest); });
    send_route_request(dest, *ttl);
  }

  void arm_buffer_purge() {
    if (net_.sim.is_pending(purge_timer_)) return;
    const auto oldest = buffer_.oldest();
    if (!oldest) return;
    purge_timer_ = net_.sim.schedule(std::max(now(), *oldest + buffer_.config().entry_timeout), [this] {
      for (const Packet& p : buffer_.expire(now())) drop(p, DropReason::BufferTimeout);
      arm_buffer_purge();
    });
  }

  SendBuffer buffer_;
  std::map<NodeId, Discovery> discoveries_;
  std::unordered_set<std::uint64_t> seen_;
  std::unordered_set<NodeId> own_destinations_;
  std::uint32_t broadcast_id_ = 0;
  std::optional<SimTime> last_data_activity_;
  EventHandle purge_timer_;
};

}  // namespace rrsim
