#pragma once

#include <optional>
#include <stdexcept>

#include "rrsim/sim_time.hpp"

namespace rrsim {

// Expanding ring search parameters. Defaults are the RFC 3561 values.
struct ErsSchedule {
  int ttl_start = 1;
  int ttl_increment = 2;
  int ttl_threshold = 7;
  int net_diameter = 35;
  int max_retries_at_diameter = 2;
  SimTime ring_slack = SimTime::millis(10);

  void validate() const {
    if (ttl_start < 1 || ttl_increment < 1 || ttl_threshold < 1 || net_diameter < 1 || max_retries_at_diameter < 0) {
      throw std::invalid_argument("ERS parameters must be positive");
    }
  }

  // Upper bound on rings per discovery, i.e. M.
  int max_rings() const;

  /// Round trip bound for one ring: out and back over `ttl` hops plus slack.
  SimTime ring_timeout(int ttl, SimTime rreq_hop_delay) const { return rreq_hop_delay * (2 * ttl) + ring_slack; }
};

struct ErsAttemptState {
  int rings_issued = 0;
  int last_ttl = 0;
  int diameter_attempts = 0;
};

/// Next TTL of the ring sequence ttl_start, +increment, ... until the
/// threshold is passed, then net_diameter for 1 + max_retries attempts.
/// Returns nullopt once the final diameter-wide attempt has been issued.
inline std::optional<int> ers_next_ttl(const ErsSchedule& s, ErsAttemptState& st) {
  int ttl;
  if (st.rings_issued == 0) {
    ttl = s.ttl_start;
  } else if (st.last_ttl < s.net_diameter) {
    ttl = st.last_ttl + s.ttl_increment;
    if (ttl > s.ttl_threshold) ttl = s.net_diameter;
  } else {
    ttl = s.net_diameter;
  }
  if (ttl >= s.net_diameter) {
    ttl = s.net_diameter;
    if (st.diameter_attempts > s.max_retries_at_diameter) return std::nullopt;
    ++st.diameter_attempts;
  }
  ++st.rings_issued;
  st.last_ttl = ttl;
  return ttl;
}

inline int ErsSchedule::max_rings() const {
  ErsAttemptState st;
  while (ers_next_ttl(*this, st)) {
  }
  return st.rings_issued;
}

}  // namespace rrsim
