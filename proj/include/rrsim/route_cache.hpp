#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "rrsim/packet.hpp"

namespace rrsim {

using Path = std::vector<NodeId>;

inline bool loop_free(const Path& p) {
  std::set<NodeId> seen;
  for (NodeId n : p) {
    if (!seen.insert(n).second) return false;
  }
  return true;
}

/// DSR path cache: whole paths starting at the owning node, bounded by an
/// entry count with FIFO eviction and no age-based expiry. A destination is
/// reachable through any cached path that contains it.
class RouteCache {
 public:
  explicit RouteCache(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("route cache capacity must be positive");
  }

  /// Inserts `path` (owner first). Re-inserting an existing path moves it to
  /// the back of the eviction order. Returns false for looping or trivial
  /// paths, which are not stored.
  bool insert(Path path) {
    if (path.size() < 2 || !loop_free(path)) return false;
    if (auto it = std::find(entries_.begin(), entries_.end(), path); it != entries_.end()) entries_.erase(it);
    entries_.push_back(std::move(path));
    while (entries_.size() > capacity_) entries_.pop_front();
    return true;
  }

  struct Lookup {
    std::optional<Path> route;
    std::size_t scanned = 0;
  };

  /// Shortest cached prefix ending at `dest`; among equal lengths the most
  /// recently inserted wins. `scanned` is the number of entries examined.
  Lookup find(NodeId dest) const {
    Lookup out;
    std::size_t best = 0;
    const Path* best_path = nullptr;
    for (const Path& p : entries_) {
      ++out.scanned;
      for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i] != dest) continue;
        if (!best_path || i <= best) {
          best = i;
          best_path = &p;
        }
        break;
      }
    }
    if (best_path) out.route = Path(best_path->begin(), best_path->begin() + static_cast<std::ptrdiff_t>(best + 1));
    return out;
  }

  /// Truncates every path at the first use of the link, in either direction
  /// (unit-disk links are symmetric). Paths left with fewer than two nodes
  /// are removed. Returns the number of paths affected.
  std::size_t remove_link(Link l) {
    std::size_t touched = 0;
    for (auto it = entries_.begin(); it != entries_.end();) {
      Path& p = *it;
      std::size_t cut = p.size();
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if ((p[i] == l.from && p[i + 1] == l.to) || (p[i] == l.to && p[i + 1] == l.from)) {
          cut = i + 1;
          break;
        }
      }
      if (cut == p.size()) {
        ++it;
        continue;
      }
      ++touched;
      p.resize(cut);
      it = p.size() < 2 ? entries_.erase(it) : std::next(it);
    }
    return touched;
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<Path>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<Path> entries_;
};

}  // namespace rrsim
