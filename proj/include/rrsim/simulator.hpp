#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rrsim/sim_time.hpp"

namespace rrsim {

/// Handle returned by Simulator::schedule; default-constructed handles refer
/// to no event.
struct EventHandle {
  std::uint64_t seq = 0;
  bool valid() const { return seq != 0; }
};

/// Single-threaded discrete-event engine. Events fire in (time, seq) order,
/// seq being the insertion counter, so equal-time events keep FIFO order.
class Simulator {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  EventHandle schedule(SimTime fire_at, Action action) {
    if (fire_at < now_) {
      throw std::logic_error("Simulator::schedule: event time precedes current time");
    }
    const std::uint64_t seq = ++next_seq_;
    queue_.push(Entry{fire_at, seq, std::move(action)});
    live_.insert(seq);
    return EventHandle{seq};
  }

  EventHandle schedule_in(SimTime delay, Action action) { return schedule(now_ + delay, std::move(action)); }

  // Cancelling an already-dispatched or unknown handle is a no-op.
  void cancel(EventHandle h) { live_.erase(h.seq); }

  bool is_pending(EventHandle h) const { return live_.contains(h.seq); }

  /// Dispatches every event with fire_at <= until, then parks the clock at
  /// `until`. Returns the number of actions executed.
  std::uint64_t run(SimTime until) {
    std::uint64_t count = 0;
    while (!queue_.empty() && queue_.top().fire_at <= until) {
      // priority_queue::top is const; the action is moved out before pop.
      Entry e = std::move(const_cast<Entry&>(queue_.top()));
      queue_.pop();
      if (live_.erase(e.seq) == 0) continue;  // cancelled
      now_ = e.fire_at;
      e.action();
      ++count;
    }
    if (now_ < until) now_ = until;
    return count;
  }

  std::size_t pending() const { return live_.size(); }

 private:
  struct Entry {
    SimTime fire_at;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  SimTime now_;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::unordered_set<std::uint64_t> live_;
};

}  // namespace rrsim
