#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <map>

#include "rrsim/node_id.hpp"
#include "rrsim/run_stats.hpp"
#include "rrsim/sim_time.hpp"

namespace rrsim {

enum class RouteState { Valid, Invalid, UnderRepair };

struct RouteEntry {
  NodeId destination;
  NodeId next_hop;
  int hop_count = 0;
  std::uint32_t dest_seq = 0;
  bool seq_known = false;
  SimTime lifetime;
  RouteState state = RouteState::Invalid;
  std::optional<SimTime> last_data_use;

  bool usable(SimTime now) const { return state == RouteState::Valid && lifetime >= now; }
  bool carrying_traffic(SimTime now, SimTime window) const {
    return last_data_use && now <= *last_data_use + window;
  }
};

struct AodvRouteEntry : RouteEntry {
  std::set<NodeId> precursors;
};

// Candidate route learned from a control packet.
struct RouteOffer {
  NodeId destination;
  NodeId next_hop;
  int hop_count = 1;
  std::optional<std::uint32_t> dest_seq;
  SimTime lifetime;
};

/// Destination-sequenced routing table. A stored sequence number never
/// decreases; the only writes go through offer(), invalidate() and
/// raise_seq(), each of which checks that and reports regressions to
/// the run's invariant log.
template <typename Entry>
class SeqRoutingTable {
 public:
  explicit SeqRoutingTable(RunStats* stats = nullptr) : stats_(stats) {}

  Entry* find(NodeId dest) {
    auto it = entries_.find(dest);
    return it == entries_.end() ? nullptr : &it->second;
  }
  const Entry* find(NodeId dest) const {
    auto it = entries_.find(dest);
    return it == entries_.end() ? nullptr : &it->second;
  }

  /// Freshness rule: install when the entry is absent or has no known
  /// sequence number, when the offered number is greater, or when it is equal
  /// and either the entry is unusable or the offer is shorter. Offers without a
  /// sequence number only replace unusable entries. Returns true if installed.
  bool offer(const RouteOffer& o, SimTime now) {
    auto [it, fresh] = entries_.try_emplace(o.destination);
    Entry& e = it->second;
    if (!fresh && !accepts(e, o, now)) {
      if (e.usable(now) && e.next_hop == o.next_hop && e.hop_count == o.hop_count) e.lifetime = std::max(e.lifetime, o.lifetime);
      return false;
    }
    const std::uint32_t before = e.dest_seq;
    const bool had_seq = e.seq_known;
    e.destination = o.destination;
    e.next_hop = o.next_hop;
    e.hop_count = o.hop_count;
    if (o.dest_seq) {
      e.dest_seq = *o.dest_seq;
      e.seq_known = true;
    }
    e.lifetime = e.state == RouteState::Valid ? std::max(e.lifetime, o.lifetime) : o.lifetime;
    e.state = RouteState::Valid;
    check_monotonic(had_seq, before, e);
    return true;
  }

  void invalidate(Entry& e, bool bump_seq) {
    const std::uint32_t before = e.dest_seq;
    if (bump_seq && e.seq_known) ++e.dest_seq;
    e.state = RouteState::Invalid;
    check_monotonic(e.seq_known, before, e);
  }

  void raise_seq(Entry& e, std::uint32_t seq) {
    const std::uint32_t before = e.dest_seq;
    const bool had = e.seq_known;
    if (!e.seq_known || seq > e.dest_seq) e.dest_seq = seq;
    e.seq_known = true;
    check_monotonic(had, before, e);
  }

  void refresh(Entry& e, SimTime until) { e.lifetime = std::max(e.lifetime, until); }

  template <typename Fn>
  void for_each(Fn&& fn) {
    for (auto& [d, e] : entries_) fn(e);
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [d, e] : entries_) fn(e);
  }

  std::size_t size() const { return entries_.size(); }

 private:
  static bool accepts(const Entry& e, const RouteOffer& o, SimTime now) {
    if (!o.dest_seq) return !e.usable(now);
    if (!e.seq_known) return true;
    if (*o.dest_seq > e.dest_seq) return true;
    if (*o.dest_seq == e.dest_seq) return !e.usable(now) || o.hop_count < e.hop_count;
    return false;
  }

  void check_monotonic(bool had_seq, std::uint32_t before, const Entry& e) {
    if (stats_ && had_seq && e.dest_seq < before) stats_->violation("seq_no_monotonicity");
  }

  RunStats* stats_;
  std::map<NodeId, Entry> entries_;
};

}  // namespace rrsim
