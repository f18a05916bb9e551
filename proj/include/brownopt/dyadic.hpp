#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace brownopt {

/// A dyadic rational x = index / 2^depth, kept in canonical form
/// (index odd, or depth == 0). The index may be negative or exceed
/// 2^depth so that points of extended domains such as [-Delta, 1+Delta]
/// are representable on the same lattice.
struct DyadicPoint {
  std::int32_t depth = 0;
  std::int64_t index = 0;

  DyadicPoint() = default;

  DyadicPoint(std::int32_t h, std::int64_t k) : depth(h), index(k) {
    if (h < 0 || h > kMaxDepth) {
      throw std::invalid_argument("DyadicPoint: depth out of range");
    }
    while (depth > 0 && (index & 1) == 0) {
      index >>= 1;
      --depth;
    }
  }

  // Depths are capped so exact comparisons fit in 128-bit arithmetic.
  static constexpr std::int32_t kMaxDepth = 48;

  double value() const { return std::ldexp(static_cast<double>(index), -depth); }

  DyadicPoint midpoint_with(const DyadicPoint& o) const {
    const std::int32_t d = std::max(depth, o.depth);
    const std::int64_t a = index << (d - depth);
    const std::int64_t b = o.index << (d - o.depth);
    return DyadicPoint(d + 1, a + b);
  }

  friend bool operator==(const DyadicPoint& a, const DyadicPoint& b) {
    return a.depth == b.depth && a.index == b.index;
  }

  friend std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b) {
    const std::int32_t d = std::max(a.depth, b.depth);
    const __int128 lhs = static_cast<__int128>(a.index) << (d - a.depth);
    const __int128 rhs = static_cast<__int128>(b.index) << (d - b.depth);
    return lhs < rhs ? std::strong_ordering::less
         : lhs > rhs ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
  }

  std::string str() const {
    if (depth == 0) return std::to_string(index);
    return std::to_string(index) + "/2^" + std::to_string(depth);
  }
};

struct DyadicPointHash {
  std::size_t operator()(const DyadicPoint& p) const {
    std::uint64_t h = static_cast<std::uint64_t>(p.index) * 0x9E3779B97F4A7C15ULL;
    h ^= (static_cast<std::uint64_t>(p.depth) + 0xD1B54A32D192ED03ULL) * 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
  }
};

/// Difference (a - b) as an exact dyadic value; throws if the result
/// cannot be canonicalized within the depth cap.
inline DyadicPoint dyadic_sub(const DyadicPoint& a, const DyadicPoint& b) {
  const std::int32_t d = std::max(a.depth, b.depth);
  const std::int64_t lhs = a.index << (d - a.depth);
  const std::int64_t rhs = b.index << (d - b.depth);
  return DyadicPoint(d, lhs - rhs);
}

inline DyadicPoint dyadic_add(const DyadicPoint& a, const DyadicPoint& b) {
  const std::int32_t d = std::max(a.depth, b.depth);
  const std::int64_t lhs = a.index << (d - a.depth);
  const std::int64_t rhs = b.index << (d - b.depth);
  return DyadicPoint(d, lhs + rhs);
}

}  // namespace brownopt
