#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace brownopt::rng {

// Counter-based keyed randomness. Every variate in the library is a pure
// function of (seed, stream tag, key fields), so materialization order,
// threading and replay cannot change a single value.

enum Stream : std::uint64_t {
  kStreamEndpoint = 1,   // cover right endpoint of a path
  kStreamMidpoint = 2,   // bridge midpoint at local (depth, index)
  kStreamNoise = 3,      // observation noise, keyed by query index
  kStreamLabel = 4,      // hidden shift direction of a ShiftedPair
  kStreamRecommend = 5,  // final recommendation draw
  kStreamScratch = 6,    // harness-internal draws (e.g. random search)
  kStreamBridge = 7,     // standalone pinned-endpoint bridge sampling
};

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.
inline std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t absorb(std::uint64_t state, std::uint64_t field) {
  return mix(state ^ mix(field + kGolden));
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t tag, std::uint64_t f1 = 0,
                         std::uint64_t f2 = 0) {
  std::uint64_t s = mix(seed + kGolden);
  s = absorb(s, tag);
  s = absorb(s, f1);
  s = absorb(s, f2);
  return s;
}

/// Uniform in the open interval (0, 1).
inline double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal variate from a single 64-bit key (Box-Muller).
inline double normal(std::uint64_t k) {
  const double u1 = unit_open(mix(k + kGolden));
  const double u2 = unit_open(mix(k + 2 * kGolden));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline double normal(std::uint64_t seed, std::uint64_t tag, std::uint64_t f1 = 0,
                     std::uint64_t f2 = 0) {
  return normal(key(seed, tag, f1, f2));
}

/// Uniform index in [0, n) via the 128-bit multiply reduction.
inline std::uint64_t bounded(std::uint64_t k, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(mix(k + kGolden)) * n) >> 64);
}

}  // namespace brownopt::rng
