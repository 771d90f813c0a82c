#pragma once

#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rrsim/packet.hpp"

namespace rrsim {

struct SendBufferConfig {
  std::size_t capacity = 64;
  SimTime entry_timeout = SimTime::whole_seconds(30);
};

/// FIFO of DATA packets waiting for a route, shared across destinations.
class SendBuffer {
 public:
  explicit SendBuffer(SendBufferConfig cfg = {}) : cfg_(cfg) {
    if (cfg_.capacity == 0) throw std::invalid_argument("send buffer capacity must be positive");
  }

  /// Enqueues; when full the oldest entry is evicted and returned.
  std::optional<Packet> push(Packet p, SimTime now) {
    std::optional<Packet> evicted;
    if (entries_.size() >= cfg_.capacity) {
      evicted = std::move(entries_.front().packet);
      entries_.pop_front();
    }
    entries_.push_back(Entry{std::move(p), now});
    return evicted;
  }

  /// Removes and returns every packet for `dest`, oldest first.
  std::vector<Packet> take(NodeId dest) {
    std::vector<Packet> out;
    std::deque<Entry> keep;
    for (auto& e : entries_) {
      if (e.packet.target == dest) {
        out.push_back(std::move(e.packet));
      } else {
        keep.push_back(std::move(e));
      }
    }
    entries_.swap(keep);
    return out;
  }

  /// Removes entries whose age exceeds the timeout.
  std::vector<Packet> expire(SimTime now) {
    std::vector<Packet> out;
    while (!entries_.empty() && now - entries_.front().enqueued_at >= cfg_.entry_timeout) {
      out.push_back(std::move(entries_.front().packet));
      entries_.pop_front();
    }
    return out;
  }

  bool has(NodeId dest) const {
    for (const auto& e : entries_) {
      if (e.packet.target == dest) return true;
    }
    return false;
  }

  std::optional<SimTime> oldest() const {
    if (entries_.empty()) return std::nullopt;
    return entries_.front().enqueued_at;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const SendBufferConfig& config() const { return cfg_; }

 private:
  struct Entry {
    Packet packet;
    SimTime enqueued_at;
  };
  SendBufferConfig cfg_;
  std::deque<Entry> entries_;
};

}  // namespace rrsim
