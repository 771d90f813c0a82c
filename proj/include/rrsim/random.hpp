#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace rrsim {

// SplitMix64 finalizer; used to hash stream ids into seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded generator built on std::mt19937_64, whose output sequence is fixed
/// by the standard. The std:: distributions are not (their algorithms are
/// implementation-defined), so the real/integer mappings are done here.
///
/// Sub-streams: stream(k) seeds a fresh generator with seed ^ mix64(k), so
/// per-node streams are independent of how many other nodes exist.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  RandomSource stream(std::uint64_t stream_id) const { return RandomSource(seed_ ^ mix64(stream_id)); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("RandomSource::uniform: empty range");
    const double v = lo + (hi - lo) * next_unit();
    return v < hi ? v : lo;
  }

  /// Uniform in (lo, hi].
  double uniform_left_open(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("RandomSource::uniform_left_open: empty range");
    const double v = hi - (hi - lo) * next_unit();
    return v > lo ? v : hi;
  }

  /// Uniform integer in [lo, hi). Rejection sampling keeps it unbiased.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    if (lo >= hi) throw std::invalid_argument("RandomSource::uniform_int: empty range");
    const std::uint64_t span = hi - lo;
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % span;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Stream-id namespaces so different consumers never share a sub-stream.
namespace streams {
inline constexpr std::uint64_t kMobility = 0x1000'0000ULL;
inline constexpr std::uint64_t kTraffic = 0x2000'0000ULL;
inline constexpr std::uint64_t kProtocol = 0x3000'0000ULL;
inline constexpr std::uint64_t kPlacement = 0x4000'0000ULL;
}  // namespace streams

}  // namespace rrsim
