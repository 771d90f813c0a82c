#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "rrsim/node_id.hpp"
#include "rrsim/random.hpp"
#include "rrsim/sim_time.hpp"

namespace rrsim {

struct Field {
  double width = 1000.0;
  double height = 1000.0;
};

struct WaypointState {
  Vec2 current_pos;
  Vec2 target;
  double speed = 1.0;   // m/s
  SimTime pause_until;  // departure time toward `target`
};

struct WaypointParams {
  Field field;
  double min_speed = 0.1;  // exclusive lower bound
  double max_speed = 1.0;
  SimTime pause_time;
};

/// Random waypoint trajectory of a single node. Legs are generated lazily from
/// the node's own random stream and retained, so position_at may be queried at
/// any past or future time and the answer does not depend on query order.
class WaypointTrajectory {
 public:
  WaypointTrajectory(WaypointParams params, WaypointState initial, RandomSource rng)
      : params_(params), rng_(std::move(rng)), start_pos_(initial.current_pos) {
    if (!(initial.speed > 0.0)) throw std::invalid_argument("waypoint speed must be positive");
    push_leg(initial.pause_until, initial.current_pos, initial.target, initial.speed);
  }

  /// Start paused at a uniform position; the first departure happens after one
  /// pause interval.
  static WaypointTrajectory random_start(WaypointParams params, RandomSource rng) {
    WaypointState s;
    s.current_pos = {rng.uniform(0.0, params.field.width), rng.uniform(0.0, params.field.height)};
    s.target = {rng.uniform(0.0, params.field.width), rng.uniform(0.0, params.field.height)};
    s.speed = rng.uniform_left_open(params.min_speed, params.max_speed);
    s.pause_until = params.pause_time;
    return WaypointTrajectory(params, s, std::move(rng));
  }

  Vec2 position_at(SimTime t) {
    while (legs_.back().arrive + params_.pause_time <= t) extend();
    auto it = std::upper_bound(legs_.begin(), legs_.end(), t,
                               [](SimTime v, const Leg& l) { return v < l.depart; });
    if (it == legs_.begin()) return start_pos_;
    const Leg& leg = *std::prev(it);
    if (t >= leg.arrive) return leg.to;
    const double f = static_cast<double>((t - leg.depart).us()) / static_cast<double>((leg.arrive - leg.depart).us());
    return {leg.from.x + (leg.to.x - leg.from.x) * f, leg.from.y + (leg.to.y - leg.from.y) * f};
  }

  std::size_t leg_count() const { return legs_.size(); }

 private:
  struct Leg {
    SimTime depart;
    SimTime arrive;
    Vec2 from;
    Vec2 to;
    double speed;
  };

  void push_leg(SimTime depart, Vec2 from, Vec2 to, double speed) {
    const SimTime travel = SimTime::seconds(distance(from, to) / speed);
    legs_.push_back(Leg{depart, depart + travel, from, to, speed});
  }

  void extend() {
    const Leg& last = legs_.back();
    const Vec2 from = last.to;
    const SimTime depart = last.arrive + params_.pause_time;
    const Vec2 to{rng_.uniform(0.0, params_.field.width), rng_.uniform(0.0, params_.field.height)};
    const double speed = rng_.uniform_left_open(params_.min_speed, params_.max_speed);
    push_leg(depart, from, to, speed);
  }

  WaypointParams params_;
  RandomSource rng_;
  Vec2 start_pos_;
  std::vector<Leg> legs_;
};

class MobilityModel {
 public:
  virtual ~MobilityModel() = default;
  virtual std::size_t size() const = 0;
  virtual Vec2 position_at(NodeId node, SimTime t) = 0;
};

class RandomWaypointMobility final : public MobilityModel {
 public:
  RandomWaypointMobility(std::size_t node_count, WaypointParams params, const RandomSource& root) {
    if (params.max_speed <= params.min_speed) throw std::invalid_argument("max_speed must exceed min_speed");
    nodes_.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
      nodes_.push_back(WaypointTrajectory::random_start(params, root.stream(streams::kMobility + i)));
    }
  }

  std::size_t size() const override { return nodes_.size(); }
  Vec2 position_at(NodeId node, SimTime t) override { return nodes_.at(node.value).position_at(t); }

 private:
  std::vector<WaypointTrajectory> nodes_;
};

/// Piecewise-linear motion through explicit (time, position) keyframes. A
/// single keyframe per node gives a static placement.
class KeyframeMobility final : public MobilityModel {
 public:
  struct Keyframe {
    SimTime at;
    Vec2 pos;
  };

  static KeyframeMobility fixed(const std::vector<Vec2>& positions) {
    KeyframeMobility m;
    for (const Vec2& p : positions) m.tracks_.push_back({Keyframe{SimTime::zero(), p}});
    return m;
  }

  NodeId add_node(std::vector<Keyframe> track) {
    if (track.empty()) throw std::invalid_argument("keyframe track must not be empty");
    std::sort(track.begin(), track.end(), [](const Keyframe& a, const Keyframe& b) { return a.at < b.at; });
    tracks_.push_back(std::move(track));
    return NodeId(static_cast<std::uint32_t>(tracks_.size() - 1));
  }

  std::size_t size() const override { return tracks_.size(); }

  Vec2 position_at(NodeId node, SimTime t) override {
    const auto& track = tracks_.at(node.value);
    if (t <= track.front().at) return track.front().pos;
    if (t >= track.back().at) return track.back().pos;
    auto it = std::upper_bound(track.begin(), track.end(), t, [](SimTime v, const Keyframe& k) { return v < k.at; });
    const Keyframe& b = *it;
    const Keyframe& a = *std::prev(it);
    const double f = static_cast<double>((t - a.at).us()) / static_cast<double>((b.at - a.at).us());
    return {a.pos.x + (b.pos.x - a.pos.x) * f, a.pos.y + (b.pos.y - a.pos.y) * f};
  }

 private:
  std::vector<std::vector<Keyframe>> tracks_;
};

}  // namespace rrsim
