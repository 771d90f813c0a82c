#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "rrsim/cost_model.hpp"
#include "rrsim/node_id.hpp"

namespace rrsim {

/// Undirected connectivity snapshot: adjacency lists indexed by node id.
class Graph {
 public:
  explicit Graph(std::size_t n = 0) : adj_(n) {}

  /// Unit-disk graph: an edge wherever two positions are within `range`.
  static Graph unit_disk(const std::vector<Vec2>& positions, double range) {
    Graph g(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
      for (std::size_t j = i + 1; j < positions.size(); ++j) {
        if (distance(positions[i], positions[j]) <= range) g.add_edge(i, j);
      }
    }
    return g;
  }

  void add_edge(std::size_t a, std::size_t b) {
    if (a >= adj_.size() || b >= adj_.size() || a == b) throw std::out_of_range("bad edge");
    adj_[a].push_back(b);
    adj_[b].push_back(a);
    ++edges_;
  }

  std::size_t size() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t n) const { return adj_.at(n); }

  /// Exact mean degree 2|E|/|V|.
  cost::Cost average_degree() const {
    if (adj_.empty()) return 0;
    return cost::Cost(static_cast<std::int64_t>(2 * edges_), static_cast<std::int64_t>(adj_.size()));
  }

  /// Hop distance from `source` to every node; -1 when unreachable.
  std::vector<int> hop_distances(std::size_t source) const {
    std::vector<int> dist(adj_.size(), -1);
    std::deque<std::size_t> q{source};
    dist.at(source) = 0;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop_front();
      for (std::size_t v : adj_[u]) {
        if (dist[v] >= 0) continue;
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
    return dist;
  }

  /// Nodes other than `source` within `ttl` hops.
  std::int64_t reach_within(std::size_t source, int ttl) const {
    std::int64_t n = 0;
    for (int d : hop_distances(source)) {
      if (d > 0 && d <= ttl) ++n;
    }
    return n;
  }

 private:
  std::vector<std::vector<std::size_t>> adj_;
  std::size_t edges_ = 0;
};

struct RingPopulations {
  std::vector<std::int64_t> shells;  // shells[k-1] = nodes exactly k hops out
  cost::Cost d_avg = 0;
};

/// Breadth-first shells around `source`. Unreachable nodes fall in no shell.
inline RingPopulations ring_populations(const Graph& g, std::size_t source) {
  RingPopulations out;
  out.d_avg = g.average_degree();
  for (int d : g.hop_distances(source)) {
    if (d <= 0) continue;
    if (out.shells.size() < static_cast<std::size_t>(d)) out.shells.resize(static_cast<std::size_t>(d), 0);
    ++out.shells[static_cast<std::size_t>(d) - 1];
  }
  return out;
}

}  // namespace rrsim
