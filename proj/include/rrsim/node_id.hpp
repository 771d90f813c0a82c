#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>

namespace rrsim {

// Dense node index, 0..N-1 for a run.
struct NodeId {
  std::uint32_t value = std::numeric_limits<std::uint32_t>::max();

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  constexpr auto operator<=>(const NodeId&) const = default;
  constexpr bool is_broadcast() const { return value == std::numeric_limits<std::uint32_t>::max(); }
};

inline constexpr NodeId kBroadcast{};

inline std::ostream& operator<<(std::ostream& os, NodeId n) {
  if (n.is_broadcast()) return os << "*";
  return os << n.value;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace rrsim

template <>
struct std::hash<rrsim::NodeId> {
  std::size_t operator()(rrsim::NodeId n) const noexcept { return std::hash<std::uint32_t>{}(n.value); }
};
