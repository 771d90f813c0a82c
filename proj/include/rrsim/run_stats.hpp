#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rrsim/node_id.hpp"
#include "rrsim/packet.hpp"
#include "rrsim/sim_time.hpp"

namespace rrsim {

struct DiscoveryRecord {
  NodeId source;
  NodeId dest;
  SimTime started;
  std::vector<int> ring_ttls;
  bool succeeded = false;
  bool exhausted = false;
};

// One detected link break on a route carrying traffic.
struct BreakRecord {
  NodeId detector;
  NodeId lost_neighbor;
  SimTime at;
  std::uint64_t tag = 0;
  bool repair_attempted = false;
  bool repair_failed = false;
};

struct SalvageRecord {
  NodeId node;
  std::size_t route_position = 0;  // 1-based hop index of the salvaging node
  bool success = false;
};

/// Protocol-level observations gathered during a run: discovery rings,
/// breaks and their RERR reach, salvages, per-node route activity, and
/// named invariant violations. Feeds the analytical cost columns and the
/// acceptance invariants.
class RunStats {
 public:
  explicit RunStats(std::size_t node_count = 0, SimTime activity_window = SimTime::whole_seconds(10))
      : window_(activity_window), activity_(node_count), hello_sent_(node_count, 0) {}

  std::uint64_t new_tag() { return ++last_tag_; }

  std::size_t begin_discovery(NodeId source, NodeId dest, SimTime now) {
    discoveries_.push_back(DiscoveryRecord{source, dest, now, {}, false, false});
    return discoveries_.size() - 1;
  }
  DiscoveryRecord& discovery(std::size_t i) { return discoveries_.at(i); }
  const std::vector<DiscoveryRecord>& discoveries() const { return discoveries_; }

  BreakRecord& add_break(BreakRecord r) {
    breaks_.push_back(r);
    return breaks_.back();
  }
  BreakRecord* find_break(std::uint64_t tag) {
    for (auto it = breaks_.rbegin(); it != breaks_.rend(); ++it) {
      if (it->tag == tag) return &*it;
    }
    return nullptr;
  }
  const std::deque<BreakRecord>& breaks() const { return breaks_; }

  void add_salvage(SalvageRecord r) { salvages_.push_back(r); }
  const std::vector<SalvageRecord>& salvages() const { return salvages_; }

  // Wired to the medium's delivery observer.
  void observe_delivery(NodeId /*from*/, NodeId to, const Packet& p) {
    if (p.tag == 0) return;
    if (p.kind() == PacketKind::Rerr) {
      rerr_receivers_[p.tag].insert(to);
    } else if (p.kind() == PacketKind::Rreq && p.as<RreqHeader>().local_repair) {
      repair_receivers_[p.tag].insert(to);
    }
  }
  std::size_t rerr_reach(std::uint64_t tag) const {
    auto it = rerr_receivers_.find(tag);
    return it == rerr_receivers_.end() ? 0 : it->second.size();
  }
  const std::unordered_set<NodeId>* rerr_receivers(std::uint64_t tag) const {
    auto it = rerr_receivers_.find(tag);
    return it == rerr_receivers_.end() ? nullptr : &it->second;
  }
  std::size_t repair_reach(std::uint64_t tag) const {
    auto it = repair_receivers_.find(tag);
    return it == repair_receivers_.end() ? 0 : it->second.size();
  }

  void note_rrep_originated(bool gratuitous) {
    ++rreps_originated_;
    if (gratuitous) ++gratuitous_rreps_;
  }
  std::uint64_t rreps_originated() const { return rreps_originated_; }
  std::uint64_t gratuitous_rreps() const { return gratuitous_rreps_; }

  void note_rrep_dropped() { ++rreps_dropped_; }
  std::uint64_t rreps_dropped() const { return rreps_dropped_; }

  void note_hello(NodeId n) { ++hello_sent_.at(n.value); }
  const std::vector<std::uint64_t>& hello_sent() const { return hello_sent_; }

  /// A node sent, forwarded or received DATA at `now`; it stays on an active
  /// route for the activity window afterwards.
  void note_data_activity(NodeId n, SimTime now) {
    Activity& a = activity_.at(n.value);
    if (a.seen && now <= a.end) {
      a.end = std::max(a.end, now + window_);
      return;
    }
    if (a.seen) a.closed_us += (a.end - a.start).us();
    a.seen = true;
    a.start = now;
    a.end = now + window_;
    if (!a.first) a.first = now;
  }
  bool is_active(NodeId n, SimTime now) const {
    const Activity& a = activity_.at(n.value);
    return a.seen && now <= a.end && now >= a.start;
  }
  /// Total time the node spent on an active route, clipped to `until`.
  SimTime active_time(NodeId n, SimTime until) const {
    const Activity& a = activity_.at(n.value);
    if (!a.seen) return SimTime::zero();
    const SimTime end = std::min(a.end, until);
    const std::int64_t open = end > a.start ? (end - a.start).us() : 0;
    return SimTime::micros(a.closed_us + open);
  }
  std::optional<SimTime> first_activity(NodeId n) const { return activity_.at(n.value).first; }

  void violation(std::string_view what) { ++violations_[std::string(what)]; }
  const std::map<std::string, std::uint64_t>& violations() const { return violations_; }
  std::uint64_t violation_count() const {
    std::uint64_t n = 0;
    for (const auto& [k, v] : violations_) n += v;
    return n;
  }

  void note_cache_size(std::size_t s) { max_cache_size_ = std::max(max_cache_size_, s); }
  std::size_t max_cache_size() const { return max_cache_size_; }
  void note_salvage_count(int c) { max_salvage_count_ = std::max(max_salvage_count_, c); }
  int max_salvage_count() const { return max_salvage_count_; }

 private:
  struct Activity {
    bool seen = false;
    SimTime start;
    SimTime end;
    std::int64_t closed_us = 0;
    std::optional<SimTime> first;
  };

  SimTime window_;
  std::uint64_t last_tag_ = 0;
  std::vector<DiscoveryRecord> discoveries_;
  std::deque<BreakRecord> breaks_;
  std::vector<SalvageRecord> salvages_;
  std::unordered_map<std::uint64_t, std::unordered_set<NodeId>> rerr_receivers_;
  std::unordered_map<std::uint64_t, std::unordered_set<NodeId>> repair_receivers_;
  std::uint64_t rreps_originated_ = 0;
  std::uint64_t gratuitous_rreps_ = 0;
  std::uint64_t rreps_dropped_ = 0;
  std::vector<Activity> activity_;
  std::vector<std::uint64_t> hello_sent_;
  std::map<std::string, std::uint64_t> violations_;
  std::size_t max_cache_size_ = 0;
  int max_salvage_count_ = 0;
};

}  // namespace rrsim
