#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "brownopt/dyadic.hpp"

namespace brownopt {

/// Result of a full-grid maximum scan.
struct MaxRecord {
  DyadicPoint argmax;
  double value = 0.0;
  std::int32_t truth_depth = 0;
};

/// Lazily materialized Brownian motion on the dyadic lattice of a closed
/// interval [a, b] with exact (dyadic) endpoints.
///
/// Construction: the interval is embedded in a cover [a, a + 2^s] with
/// 2^s the smallest power of two >= b - a.  The cover's right endpoint is
/// drawn as anchor + N(0, 2^s); every other lattice point is the midpoint
/// of its parent interval, drawn from the Brownian bridge conditional law
/// N((w_l + w_r)/2, len/4).  Each draw comes from a counter-based stream
/// keyed by (seed, domain fingerprint, local depth, local index) only, so
/// a point's value is a pure function of the path identity: materialization
/// order can never change it, and distinct paths never share variates.
///
/// A path instance caches what it materializes and is therefore confined
/// to one thread; distinct instances (even with equal seeds) may be used
/// concurrently and will agree bit-for-bit.
class DyadicPath {
 public:
  DyadicPath(std::uint64_t seed, DyadicPoint a, DyadicPoint b, double anchor);

  /// Standard BM on [0, 1] anchored at W_0 = 0.
  static DyadicPath unit(std::uint64_t seed) {
    return DyadicPath(seed, DyadicPoint(0, 0), DyadicPoint(0, 1), 0.0);
  }

  /// Path value at a lattice point; materializes the ancestor chain on
  /// first access.  Throws std::domain_error outside [a, b].
  double value(const DyadicPoint& p);

  /// Values on the depth-`depth` lattice restricted to [a, b], ordered by
  /// position: out[j] = W(a + j / 2^depth).  `depth` must resolve both
  /// endpoints.  Does not populate the cache.
  std::vector<double> grid_values(std::int32_t depth);

  /// Maximum (value and argmax) over the depth-`truth_depth` lattice.
  /// The discrete maximum is stochastically below the continuum maximum;
  /// Lemma-style sup bounds quantify the gap at scale 2^-truth_depth.
  MaxRecord grid_max(std::int32_t truth_depth);

  const DyadicPoint& lo() const { return lo_; }
  const DyadicPoint& hi() const { return hi_; }
  double anchor() const { return anchor_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t materialized_count() const { return cache_.size(); }

  bool contains(const DyadicPoint& p) const { return lo_ <= p && p <= hi_; }

  /// Memory guard for full-grid scans: (b-a) * 2^depth may not exceed this.
  static constexpr std::int64_t kMaxGridCells = std::int64_t(1) << 26;

 private:
  struct Local {  // canonical coordinates on the cover lattice
    std::int32_t depth;
    std::int64_t index;
  };

  Local to_local(const DyadicPoint& p) const;
  double value_local(std::int32_t depth, std::int64_t index);

  std::uint64_t seed_ = 0;      // user seed
  std::uint64_t stream_ = 0;    // seed mixed with the domain fingerprint
  DyadicPoint lo_, hi_;
  double anchor_ = 0.0;
  std::int32_t cover_log2_ = 0;  // cover length = 2^cover_log2_
  double cover_len_ = 1.0;
  std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace brownopt
