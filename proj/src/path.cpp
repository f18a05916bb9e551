#include "brownopt/path.hpp"

#include <cmath>
#include <stdexcept>

#include "brownopt/rng.hpp"

namespace brownopt {

namespace {

// Midpoint of an interval of length `len` with endpoint values (vl, vr).
// Shared by the recursive and the level-order evaluation so that both
// produce bit-identical values for the same key.
inline double bridge_child(double vl, double vr, double len, double z) {
  return 0.5 * (vl + vr) + std::sqrt(0.25 * len) * z;
}

inline std::uint64_t pack_local(std::int32_t depth, std::int64_t index) {
  return (static_cast<std::uint64_t>(depth) << 56) | static_cast<std::uint64_t>(index);
}

}  // namespace

DyadicPath::DyadicPath(std::uint64_t seed, DyadicPoint a, DyadicPoint b, double anchor)
    : seed_(seed), lo_(a), hi_(b), anchor_(anchor) {
  if (!(a < b)) {
    throw std::invalid_argument("DyadicPath: domain must satisfy a < b");
  }
  // Smallest power of two covering b - a.
  const DyadicPoint len = dyadic_sub(b, a);
  std::int32_t s = -len.depth;
  while ((std::int64_t(1) << (s + len.depth)) < len.index) ++s;
  cover_log2_ = s;
  cover_len_ = std::ldexp(1.0, cover_log2_);
  stream_ = rng::mix(seed + rng::kGolden);
  stream_ = rng::absorb(stream_, static_cast<std::uint64_t>(lo_.depth));
  stream_ = rng::absorb(stream_, static_cast<std::uint64_t>(lo_.index));
  stream_ = rng::absorb(stream_, static_cast<std::uint64_t>(hi_.depth));
  stream_ = rng::absorb(stream_, static_cast<std::uint64_t>(hi_.index));
}

DyadicPath::Local DyadicPath::to_local(const DyadicPoint& p) const {
  // u = (x - a) / 2^s on the cover lattice, canonicalized.
  const DyadicPoint rel = dyadic_sub(p, lo_);
  std::int32_t depth = rel.depth + cover_log2_;
  std::int64_t index = rel.index;
  if (depth < 0) {
    index <<= -depth;
    depth = 0;
  }
  while (depth > 0 && (index & 1) == 0) {
    index >>= 1;
    --depth;
  }
  return Local{depth, index};
}

double DyadicPath::value(const DyadicPoint& p) {
  if (!contains(p)) {
    throw std::domain_error("DyadicPath::value: point outside domain [" + lo_.str() +
                            ", " + hi_.str() + "]: " + p.str());
  }
  const Local loc = to_local(p);
  if (loc.depth > DyadicPoint::kMaxDepth) {
    throw std::invalid_argument("DyadicPath::value: depth exceeds the lattice cap");
  }
  return value_local(loc.depth, loc.index);
}

double DyadicPath::value_local(std::int32_t depth, std::int64_t index) {
  if (depth == 0) {
    if (index == 0) return anchor_;
    return anchor_ + std::sqrt(cover_len_) * rng::normal(stream_, rng::kStreamEndpoint);
  }
  const std::uint64_t packed = pack_local(depth, index);
  if (auto it = cache_.find(packed); it != cache_.end()) return it->second;

  // Parents of the (odd) midpoint index at this depth.
  std::int32_t hl = depth, hr = depth;
  std::int64_t kl = index - 1, kr = index + 1;
  while (hl > 0 && (kl & 1) == 0) { kl >>= 1; --hl; }
  while (hr > 0 && (kr & 1) == 0) { kr >>= 1; --hr; }
  const double vl = value_local(hl, kl);
  const double vr = value_local(hr, kr);
  const double len = std::ldexp(cover_len_, 1 - depth);
  const double v = bridge_child(vl, vr, len,
                                rng::normal(stream_, rng::kStreamMidpoint,
                                            static_cast<std::uint64_t>(depth),
                                            static_cast<std::uint64_t>(index)));
  cache_.emplace(packed, v);
  return v;
}

std::vector<double> DyadicPath::grid_values(std::int32_t depth) {
  if (depth < lo_.depth || depth < hi_.depth || depth < 0) {
    throw std::invalid_argument(
        "DyadicPath::grid_values: depth does not resolve the domain endpoints");
  }
  const std::int64_t last = (hi_.index << (depth - hi_.depth)) -
                            (lo_.index << (depth - lo_.depth));
  if (last > kMaxGridCells) {
    throw std::length_error("DyadicPath::grid_values: grid exceeds the memory guard");
  }
  // Level-order fill of the cover lattice, restricted at every level to the
  // prefix of ancestors of the domain grid.  Local level `local_depth`
  // has spacing 2^-depth, so local index j is the global offset j of
  // x = a + j / 2^depth.
  const std::int32_t local_depth = depth + cover_log2_;
  const double right_end =
      anchor_ + std::sqrt(cover_len_) * rng::normal(stream_, rng::kStreamEndpoint);
  std::vector<double> row{anchor_, right_end};  // level 0: cover endpoints
  std::vector<double> next;
  for (std::int32_t h = 1; h <= local_depth; ++h) {
    const std::int64_t extent = ((last - 1) >> (local_depth - h)) + 1;
    next.assign(static_cast<std::size_t>(extent) + 1, 0.0);
    const double len = std::ldexp(cover_len_, 1 - h);
    for (std::int64_t k = 0; k <= extent; ++k) {
      if ((k & 1) == 0) {
        next[k] = row[k >> 1];
      } else {
        next[k] = bridge_child(row[(k - 1) >> 1], row[(k + 1) >> 1], len,
                               rng::normal(stream_, rng::kStreamMidpoint,
                                           static_cast<std::uint64_t>(h),
                                           static_cast<std::uint64_t>(k)));
      }
    }
    row.swap(next);
  }
  row.resize(static_cast<std::size_t>(last) + 1);
  return row;
}

MaxRecord DyadicPath::grid_max(std::int32_t truth_depth) {
  if (truth_depth < 1) {
    throw std::invalid_argument("DyadicPath::grid_max: truth_depth must be >= 1");
  }
  const std::vector<double> vals = grid_values(truth_depth);
  std::size_t best = 0;
  for (std::size_t j = 1; j < vals.size(); ++j) {
    if (vals[j] > vals[best]) best = j;
  }
  const std::int64_t k_lo = lo_.index << (truth_depth - lo_.depth);
  MaxRecord rec;
  rec.argmax = DyadicPoint(truth_depth, k_lo + static_cast<std::int64_t>(best));
  rec.value = vals[best];
  rec.truth_depth = truth_depth;
  return rec;
}

}  // namespace brownopt
