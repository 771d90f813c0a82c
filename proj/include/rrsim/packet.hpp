#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "rrsim/node_id.hpp"
#include "rrsim/sim_time.hpp"

namespace rrsim {

enum class PacketKind : std::uint8_t { Rreq = 0, Rrep = 1, Rerr = 2, Hello = 3, Data = 4 };

constexpr std::string_view to_string(PacketKind k) {
  switch (k) {
    case PacketKind::Rreq: return "RREQ";
    case PacketKind::Rrep: return "RREP";
    case PacketKind::Rerr: return "RERR";
    case PacketKind::Hello: return "HELLO";
    case PacketKind::Data: return "DATA";
  }
  return "?";
}

struct Link {
  NodeId from;
  NodeId to;
  friend bool operator==(const Link&, const Link&) = default;
};

struct UnreachableDest {
  NodeId dest;
  std::uint32_t seq = 0;
};

struct RreqHeader {
  std::uint32_t broadcast_id = 0;
  std::uint32_t origin_seq = 0;
  std::uint32_t dest_seq = 0;
  bool dest_seq_known = false;
  bool local_repair = false;
  std::vector<NodeId> path;            // accumulated route, origin first (DSR)
  std::vector<Link> piggyback_rerr;    // broken links carried along (DSR)
};

// Common header origin = advertised route destination, target = requester.
struct RrepHeader {
  NodeId replier;
  std::uint32_t dest_seq = 0;
  bool gratuitous = false;
  std::vector<NodeId> path;  // full source route requester..destination (DSR)
  std::size_t path_index = 0;
};

struct RerrHeader {
  std::uint32_t rerr_id = 0;
  std::vector<UnreachableDest> unreachable;
  std::optional<Link> broken_link;
  std::vector<NodeId> return_path;  // DSR: unicast back to the data source, source first
  std::size_t path_index = 0;
};

struct HelloHeader {
  std::uint32_t seq = 0;
};

struct DataHeader {
  std::uint64_t uid = 0;
  std::uint32_t payload_bytes = 512;
  SimTime originated_at;
  std::vector<NodeId> source_route;  // DSR only
  std::size_t route_index = 0;       // position of the current holder in source_route
  int salvage_count = 0;
};

/// Fixed on-air sizes for control packets; DATA size is its payload.
struct PacketSizes {
  std::uint32_t rreq = 48;
  std::uint32_t rrep = 44;
  std::uint32_t rerr = 32;
  std::uint32_t hello = 32;
};

struct Packet {
  NodeId origin;
  NodeId target;
  int ttl = 1;
  int hop_count = 0;
  std::uint64_t tag = 0;  // correlates a flood or RERR wave with a run-stats record; 0 = none
  std::variant<RreqHeader, RrepHeader, RerrHeader, HelloHeader, DataHeader> body;

  PacketKind kind() const { return static_cast<PacketKind>(body.index()); }
  bool is_control() const { return kind() != PacketKind::Data; }

  template <typename H>
  H& as() {
    return std::get<H>(body);
  }
  template <typename H>
  const H& as() const {
    return std::get<H>(body);
  }

  std::uint32_t size_bytes(const PacketSizes& sizes = {}) const {
    switch (kind()) {
      case PacketKind::Rreq: return sizes.rreq;
      case PacketKind::Rrep: return sizes.rrep;
      case PacketKind::Rerr: return sizes.rerr;
      case PacketKind::Hello: return sizes.hello;
      case PacketKind::Data: return as<DataHeader>().payload_bytes;
    }
    return 0;
  }
};

}  // namespace rrsim
