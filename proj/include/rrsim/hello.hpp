#pragma once

#include <functional>
#include <unordered_map>

#include "rrsim/network.hpp"

namespace rrsim {

/// Periodic 1-hop HELLO beacons plus neighbor liveness. Beacons go out only
/// while the owner is on an active route. A neighbor is monitored once it has
/// sent a HELLO or once the owner starts routing through it; it is declared
/// lost after allowed_loss * interval of silence.
class HelloMonitor {
 public:
  using ActivePredicate = std::function<bool()>;
  using LostHandler = std::function<void(NodeId)>;

  HelloMonitor(Network& net, NodeId self, ActivePredicate active, LostHandler lost)
      : net_(net), self_(self), active_(std::move(active)), lost_(std::move(lost)) {}

  void start(SimTime first_tick) {
    net_.sim.schedule(first_tick, [this] { tick(); });
  }

  /// Any packet received from `n` proves the link is up.
  void heard(NodeId n, bool is_hello) {
    auto it = neighbors_.find(n);
    if (it == neighbors_.end()) {
      if (!is_hello) return;
      it = neighbors_.emplace(n, Neighbor{}).first;
    }
    it->second.last_heard = net_.now();
    arm(n, it->second);
  }

  /// Begin monitoring a next hop that just started carrying traffic.
  void watch(NodeId n) {
    auto [it, inserted] = neighbors_.try_emplace(n, Neighbor{net_.now(), {}});
    if (inserted) arm(n, it->second);
  }

  bool monitors(NodeId n) const { return neighbors_.contains(n); }
  std::uint64_t sent() const { return sent_; }

 private:
  struct Neighbor {
    SimTime last_heard;
    EventHandle timer;
  };

  void arm(NodeId n, Neighbor& nb) {
    if (net_.sim.is_pending(nb.timer)) return;
    nb.timer = net_.sim.schedule(nb.last_heard + net_.params.hello.silence_limit(), [this, n] { check(n); });
  }

  void check(NodeId n) {
    auto it = neighbors_.find(n);
    if (it == neighbors_.end()) return;
    const SimTime deadline = it->second.last_heard + net_.params.hello.silence_limit();
    if (deadline > net_.now()) {
      it->second.timer = net_.sim.schedule(deadline, [this, n] { check(n); });
      return;
    }
    neighbors_.erase(it);
    lost_(n);
  }

  void tick() {
    if (active_()) {
      Packet hello;
      hello.origin = self_;
      hello.target = kBroadcast;
      hello.ttl = 1;
      hello.body = HelloHeader{++seq_};
      net_.medium.broadcast(self_, std::move(hello));
      net_.stats.note_hello(self_);
      ++sent_;
    }
    net_.sim.schedule_in(net_.params.hello.interval, [this] { tick(); });
  }

  Network& net_;
  NodeId self_;
  ActivePredicate active_;
  LostHandler lost_;
  std::unordered_map<NodeId, Neighbor> neighbors_;
  std::uint32_t seq_ = 0;
  std::uint64_t sent_ = 0;
};

}  // namespace rrsim
