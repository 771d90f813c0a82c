#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "rrsim/mobility.hpp"
#include "rrsim/packet.hpp"
#include "rrsim/simulator.hpp"

namespace rrsim {

struct RadioModel {
  double range_m = 250.0;
  double bandwidth_bps = 2'000'000.0;
  SimTime base_delay = SimTime::millis(1);  // propagation + processing per hop

  /// base + size * 8 / bandwidth, rounded up to the next microsecond.
  SimTime hop_delay(std::uint32_t size_bytes) const {
    if (size_bytes == 0) throw std::invalid_argument("hop_delay: packet size must be positive");
    const double tx_us = static_cast<double>(size_bytes) * 8.0 * 1e6 / bandwidth_bps;
    return base_delay + SimTime::micros(static_cast<std::int64_t>(std::ceil(tx_us - 1e-9)));
  }
};

/// Idealized unit-disk broadcast medium. No MAC contention: every send is
/// delivered after a deterministic per-hop delay. Unicast reachability is
/// evaluated at delivery time, so a receiver that moves away mid-flight
/// produces a link-failure callback to the sender instead of a delivery.
class Medium {
 public:
  using ReceiveHandler = std::function<void(const Packet&, NodeId from)>;
  using FailureHandler = std::function<void(const Packet&, NodeId intended_next_hop)>;
  using TransmitObserver = std::function<void(NodeId sender, const Packet&)>;
  using DeliveryObserver = std::function<void(NodeId from, NodeId to, const Packet&)>;

  Medium(Simulator& sim, MobilityModel& mobility, RadioModel radio, PacketSizes sizes = {})
      : sim_(sim), mobility_(mobility), radio_(radio), sizes_(sizes), nodes_(mobility.size()) {
    if (!(radio.range_m > 0.0)) throw std::invalid_argument("radio range must be positive");
    if (!(radio.bandwidth_bps > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  }

  std::size_t node_count() const { return nodes_.size(); }
  const RadioModel& radio() const { return radio_; }
  const PacketSizes& sizes() const { return sizes_; }
  SimTime hop_delay(const Packet& p) const { return radio_.hop_delay(p.size_bytes(sizes_)); }

  void attach(NodeId node, ReceiveHandler on_receive, FailureHandler on_failure) {
    Port& port = nodes_.at(node.value);
    port.on_receive = std::move(on_receive);
    port.on_failure = std::move(on_failure);
  }

  void set_transmit_observer(TransmitObserver obs) { on_transmit_ = std::move(obs); }
  void add_delivery_observer(DeliveryObserver obs) { on_delivery_.push_back(std::move(obs)); }

  Vec2 position_at(NodeId node, SimTime t) {
    check(node);
    if (t == sim_.now()) return current_positions()[node.value];
    return mobility_.position_at(node, t);
  }

  bool in_range(NodeId a, NodeId b, SimTime t) {
    return distance(position_at(a, t), position_at(b, t)) <= radio_.range_m;
  }

  /// Nodes other than `node` within radio range at time t, in ascending id order.
  std::vector<NodeId> neighbors(NodeId node, SimTime t) {
    check(node);
    std::vector<NodeId> out;
    if (t == sim_.now()) {
      const auto& pos = current_positions();
      for (std::uint32_t i = 0; i < pos.size(); ++i) {
        if (i != node.value && distance(pos[node.value], pos[i]) <= radio_.range_m) out.emplace_back(i);
      }
      return out;
    }
    const Vec2 me = mobility_.position_at(node, t);
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
      if (i != node.value && distance(me, mobility_.position_at(NodeId(i), t)) <= radio_.range_m) out.emplace_back(i);
    }
    return out;
  }

  void broadcast(NodeId sender, Packet packet) {
    check(sender);
    auto shared = std::make_shared<const Packet>(std::move(packet));
    if (on_transmit_) on_transmit_(sender, *shared);
    const SimTime at = sim_.now() + hop_delay(*shared);
    for (NodeId n : neighbors(sender, sim_.now())) {
      sim_.schedule(at, [this, sender, n, shared] { deliver(sender, n, *shared); });
    }
  }

  void unicast(NodeId sender, NodeId dest, Packet packet) {
    check(sender);
    if (dest.is_broadcast() || dest.value >= nodes_.size()) throw std::out_of_range("unicast: unknown destination");
    auto shared = std::make_shared<const Packet>(std::move(packet));
    if (on_transmit_) on_transmit_(sender, *shared);
    sim_.schedule_in(hop_delay(*shared), [this, sender, dest, shared] {
      if (in_range(sender, dest, sim_.now())) {
        deliver(sender, dest, *shared);
      } else if (auto& f = nodes_[sender.value].on_failure) {
        f(*shared, dest);
      }
    });
  }

 private:
  struct Port {
    ReceiveHandler on_receive;
    FailureHandler on_failure;
  };

  void check(NodeId n) const {
    if (n.is_broadcast() || n.value >= nodes_.size()) throw std::out_of_range("unknown node id");
  }

  void deliver(NodeId from, NodeId to, const Packet& p) {
    for (auto& obs : on_delivery_) obs(from, to, p);
    if (auto& h = nodes_[to.value].on_receive) h(p, from);
  }

  const std::vector<Vec2>& current_positions() {
    if (cache_valid_ && cache_time_ == sim_.now()) return cache_;
    cache_.resize(nodes_.size());
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) cache_[i] = mobility_.position_at(NodeId(i), sim_.now());
    cache_time_ = sim_.now();
    cache_valid_ = true;
    return cache_;
  }

  Simulator& sim_;
  MobilityModel& mobility_;
  RadioModel radio_;
  PacketSizes sizes_;
  std::vector<Port> nodes_;
  TransmitObserver on_transmit_;
  std::vector<DeliveryObserver> on_delivery_;
  std::vector<Vec2> cache_;
  SimTime cache_time_;
  bool cache_valid_ = false;
};

}  // namespace rrsim
