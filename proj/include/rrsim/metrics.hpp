#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rrsim/packet.hpp"
#include "rrsim/sim_time.hpp"

namespace rrsim {

enum class DropReason : std::uint8_t {
  NoRoute,         // discovery exhausted or no route at a forwarder
  BufferOverflow,  // send buffer full, oldest evicted
  BufferTimeout,   // waited longer than the buffer timeout
  LinkFailure,     // unicast failed and nothing recovered the packet
  TtlExpired,
  MalformedRoute,  // DSR source route does not contain the forwarder
};
inline constexpr std::size_t kDropReasonCount = 6;

constexpr std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::NoRoute: return "no_route";
    case DropReason::BufferOverflow: return "buffer_overflow";
    case DropReason::BufferTimeout: return "buffer_timeout";
    case DropReason::LinkFailure: return "link_failure";
    case DropReason::TtlExpired: return "ttl_expired";
    case DropReason::MalformedRoute: return "malformed_route";
  }
  return "?";
}

struct ControlCounts {
  std::uint64_t rreq = 0;
  std::uint64_t rrep = 0;
  std::uint64_t rerr = 0;
  std::uint64_t hello = 0;
  std::uint64_t total() const { return rreq + rrep + rerr + hello; }
};

struct MetricsReport {
  SimTime duration;
  std::uint64_t data_originated = 0;
  std::uint64_t data_delivered = 0;
  std::uint64_t data_dropped = 0;
  std::uint64_t in_flight_at_end = 0;
  std::array<std::uint64_t, kDropReasonCount> drops_by_reason{};
  double throughput_bps = 0.0;
  double avg_e2e_delay_s = 0.0;
  ControlCounts control_tx;
  std::uint64_t data_tx = 0;
  std::uint64_t repair_rreq_tx = 0;  // RREQs flagged as local repair
  std::optional<double> nrl;         // undefined when nothing was delivered
  std::uint64_t terminal_state_violations = 0;

  bool conserved() const { return data_originated == data_delivered + data_dropped + in_flight_at_end; }
};

/// Event-sourced run metrics. Each DATA packet uid is tracked to exactly one
/// terminal state; a second terminal event for the same uid is counted as a
/// violation rather than double counted.
class Metrics {
 public:
  void record_originated(std::uint64_t uid) {
    auto [it, inserted] = state_.emplace(uid, State::InFlight);
    if (!inserted) {
      ++violations_;
      return;
    }
    ++originated_;
  }

  void record_delivered(std::uint64_t uid, SimTime delay, std::uint32_t payload_bytes) {
    if (!settle(uid)) return;
    ++delivered_;
    delay_sum_us_ += delay.us();
    ++delay_samples_;
    delivered_bits_ += static_cast<std::uint64_t>(payload_bytes) * 8;
  }

  void record_dropped(std::uint64_t uid, DropReason reason) {
    if (!settle(uid)) return;
    ++dropped_;
    ++drops_[static_cast<std::size_t>(reason)];
  }

  /// One call per send, independent of how many receivers a broadcast reaches.
  void record_transmission(const Packet& p) {
    switch (p.kind()) {
      case PacketKind::Rreq:
        ++control_.rreq;
        if (p.as<RreqHeader>().local_repair) ++repair_rreq_;
        break;
      case PacketKind::Rrep: ++control_.rrep; break;
      case PacketKind::Rerr: ++control_.rerr; break;
      case PacketKind::Hello: ++control_.hello; break;
      case PacketKind::Data: ++data_tx_; break;
    }
  }

  std::uint64_t originated() const { return originated_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t delay_samples() const { return delay_samples_; }
  const ControlCounts& control() const { return control_; }

  MetricsReport finalize(SimTime duration) const {
    if (duration <= SimTime::zero()) throw std::invalid_argument("finalize: duration must be positive");
    MetricsReport r;
    r.duration = duration;
    r.data_originated = originated_;
    r.data_delivered = delivered_;
    r.data_dropped = dropped_;
    for (const auto& [uid, s] : state_) {
      if (s == State::InFlight) ++r.in_flight_at_end;
    }
    r.drops_by_reason = drops_;
    r.throughput_bps = static_cast<double>(delivered_bits_) / duration.to_seconds();
    r.avg_e2e_delay_s = delay_samples_ ? static_cast<double>(delay_sum_us_) / 1e6 / static_cast<double>(delay_samples_) : 0.0;
    r.control_tx = control_;
    r.data_tx = data_tx_;
    r.repair_rreq_tx = repair_rreq_;
    if (delivered_ > 0) r.nrl = static_cast<double>(control_.total()) / static_cast<double>(delivered_);
    r.terminal_state_violations = violations_;
    return r;
  }

 private:
  enum class State : std::uint8_t { InFlight, Settled };

  bool settle(std::uint64_t uid) {
    auto it = state_.find(uid);
    if (it == state_.end() || it->second != State::InFlight) {
      ++violations_;
      return false;
    }
    it->second = State::Settled;
    return true;
  }

  std::unordered_map<std::uint64_t, State> state_;
  std::uint64_t originated_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::array<std::uint64_t, kDropReasonCount> drops_{};
  std::int64_t delay_sum_us_ = 0;
  std::uint64_t delay_samples_ = 0;
  std::uint64_t delivered_bits_ = 0;
  ControlCounts control_;
  std::uint64_t data_tx_ = 0;
  std::uint64_t repair_rreq_ = 0;
  std::uint64_t violations_ = 0;
};

}  // namespace rrsim
