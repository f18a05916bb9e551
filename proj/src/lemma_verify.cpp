#include "brownopt/lemma_verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "brownopt/closed_form.hpp"
#include "brownopt/parallel.hpp"

namespace brownopt {

EventMReport check_event_M(DyadicPath& path, const RunTrace& trace, double delta,
                           std::int32_t h_check) {
  if (h_check < 1 || h_check > 26) {
    throw std::invalid_argument("check_event_M: h_check out of range");
  }
  EventMReport rep;
  rep.h_check = h_check;
  rep.delta = delta;
  rep.delta_warning = delta >= 1.0 / 3.0;

  const std::vector<double> grid = path.grid_values(h_check);

  // M1 and the proxy-Hoelder events C / C' over every lattice interval of
  // depth h <= h_check.
  for (std::int32_t h = 0; h <= h_check; ++h) {
    const std::int64_t step = std::int64_t(1) << (h_check - h);
    const double a_h = alpha_bound(std::ldexp(1.0, -h), delta);
    const double e_h = eta_bound(std::ldexp(1.0, -h), delta);
    for (std::int64_t k = 0; (k + 1) * step < static_cast<std::int64_t>(grid.size()) + step;
         ++k) {
      const std::int64_t lo = k * step;
      const std::int64_t hi = (k + 1) * step;
      if (hi >= static_cast<std::int64_t>(grid.size())) break;
      const double wl = grid[lo];
      const double wr = grid[hi];
      if (std::abs(wr - wl) > a_h) rep.m1 = false;
      double seg_max = wl, seg_min = wl;
      for (std::int64_t j = lo; j <= hi; ++j) {
        seg_max = std::max(seg_max, grid[j]);
        seg_min = std::min(seg_min, grid[j]);
      }
      if (seg_max > std::max(wl, wr) + e_h) rep.c_event = false;
      if (seg_min < std::min(wl, wr) - e_h) rep.c_prime = false;
    }
  }

  // M2-M4 over the actually sampled rounds, truncated at h_check.  Round r
  // samples the depth-(r+1) point set J_{r+1} and produces the depth-(r+1)
  // interval set.
  for (const RoundSnapshot& snap : trace.rounds) {
    const std::int32_t d = snap.round + 1;
    if (d > h_check) continue;
    const double w = std::ldexp(1.0, -d);
    const double a_d = alpha_bound(w, delta);
    const double slack = eta_bound(w, delta) + a_d;

    std::unordered_map<DyadicPoint, double, DyadicPointHash> means;
    means.reserve(snap.j_stats.size());
    for (const RoundPointStat& ps : snap.j_stats) {
      means.emplace(ps.point, ps.mean);
      if (std::abs(ps.mean - path.value(ps.point)) > a_d) rep.m2 = false;
    }
    for (const IntervalRec& iv : snap.intervals) {
      const auto lo_it = means.find(iv.lo());
      const auto hi_it = means.find(iv.hi());
      if (lo_it == means.end() || hi_it == means.end()) continue;  // truncated round
      const double ucb_v = std::max(lo_it->second, hi_it->second) + slack;
      const double lcb_v = std::min(lo_it->second, hi_it->second) - slack;
      const std::int64_t step = std::int64_t(1) << (h_check - d);
      const std::int64_t g_lo = iv.index * step;
      double seg_max = grid[g_lo], seg_min = grid[g_lo];
      for (std::int64_t j = g_lo; j <= g_lo + step; ++j) {
        seg_max = std::max(seg_max, grid[j]);
        seg_min = std::min(seg_min, grid[j]);
      }
      if (seg_max > ucb_v) rep.m3 = false;
      if (seg_min < lcb_v) rep.m4 = false;
    }
  }
  return rep;
}

std::int64_t count_near_optimal(DyadicPath& path, std::int32_t depth, double eta_gap) {
  if (eta_gap < 0.0) throw std::invalid_argument("count_near_optimal: eta_gap must be >= 0");
  const std::vector<double> grid = path.grid_values(depth);
  const double m = *std::max_element(grid.begin(), grid.end());
  std::int64_t count = 0;
  for (const double v : grid) {
    if (v >= m - eta_gap) ++count;
  }
  return count;
}

GapBoundReport check_gap_bound(std::span<const std::uint64_t> seeds, std::int32_t depth,
                               std::span<const double> quantiles) {
  if (seeds.empty()) throw std::invalid_argument("check_gap_bound: no seeds");
  std::vector<double> gaps(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    DyadicPath path = DyadicPath::unit(seeds[i]);
    const std::vector<double> grid = path.grid_values(depth);
    const auto [mn, mx] = std::minmax_element(grid.begin(), grid.end());
    gaps[i] = *mx - *mn;
  }
  GapBoundReport rep;
  for (const double g : gaps) rep.mean += g;
  rep.mean /= static_cast<double>(gaps.size());

  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const double q : quantiles) {
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("check_gap_bound: quantile not in [0,1)");
    const auto at = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1));
    const double thr = sorted[at];
    double sum = 0;
    std::int64_t cnt = 0;
    for (const double g : gaps) {
      if (g >= thr) { sum += g; ++cnt; }
    }
    GapQuantileRow row;
    row.q = q;
    row.prob = 1.0 - q;
    row.scale = std::sqrt(std::log(1.0 / row.prob));
    row.cond_mean = sum / static_cast<double>(cnt);
    rep.rows.push_back(row);
    sx += row.scale; sy += row.cond_mean;
    sxx += row.scale * row.scale; sxy += row.scale * row.cond_mean;
  }
  const double n = static_cast<double>(rep.rows.size());
  const double denom = n * sxx - sx * sx;
  rep.growth_coef = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  rep.intercept = (sy - rep.growth_coef * sx) / n;
  return rep;
}

namespace {

// Shared driver: classify(seed) returns 2*conditioned + satisfied.
template <typename Classify>
FrequencyCheck meander_frequency(std::int64_t n, std::uint64_t seed0, int jobs, double bound,
                                 Classify&& classify) {
  std::vector<unsigned char> flags(static_cast<std::size_t>(n), 0);
  parallel_for(n, jobs, [&](std::int64_t i) {
    flags[static_cast<std::size_t>(i)] = classify(seed0 + static_cast<std::uint64_t>(i));
  });
  FrequencyCheck out;
  out.n_total = n;
  std::int64_t cond = 0, sat = 0;
  for (const unsigned char f : flags) {
    if (f & 2u) {
      ++cond;
      if (f & 1u) ++sat;
    }
  }
  out.n = cond;
  out.bound = bound;
  if (cond > 0) {
    out.frequency = static_cast<double>(sat) / static_cast<double>(cond);
    out.std_error =
        std::sqrt(std::max(out.frequency * (1.0 - out.frequency), 1e-12) /
                  static_cast<double>(cond));
  }
  return out;
}

}  // namespace

FrequencyCheck check_meander_running_max(double s, double t, double x, std::int32_t depth,
                                         std::int64_t n, std::uint64_t seed0, int jobs) {
  if (!(0.0 < s && s < t && t <= 1.0)) {
    throw std::invalid_argument("check_meander_running_max: need 0 < s < t <= 1");
  }
  if (!(x >= 0.0 && x < std::sqrt(s) / 2.0)) {
    throw std::invalid_argument("check_meander_running_max: need 0 <= x < sqrt(s)/2");
  }
  const double bound = t > 2.0 * s ? 1.0 - 0.5 * (x / std::sqrt(s)) * (x / std::sqrt(s))
                                   : 1.0 - std::sqrt(2.0) * x / std::sqrt(s);
  const auto cells = static_cast<std::int64_t>(std::ldexp(1.0, depth));
  const auto t_end = static_cast<std::int64_t>(std::round(t * static_cast<double>(cells)));
  const auto s_end = static_cast<std::int64_t>(std::round(s * static_cast<double>(cells)));
  return meander_frequency(n, seed0, jobs, bound, [=](std::uint64_t seed) {
    DyadicPath path = DyadicPath::unit(seed);
    const std::vector<double> grid = path.grid_values(depth);
    double run_min = grid[1];
    for (std::int64_t j = 1; j <= t_end; ++j) run_min = std::min(run_min, grid[j]);
    if (!(run_min > 0.0)) return static_cast<unsigned char>(0);
    double run_max = 0.0;  // includes W_0 = 0
    for (std::int64_t j = 0; j <= s_end; ++j) run_max = std::max(run_max, grid[j]);
    return static_cast<unsigned char>(2u | (run_max >= x ? 1u : 0u));
  });
}

double bridge_grid_max(std::uint64_t seed, double w_a, double w_b, double len,
                       std::int32_t depth) {
  if (!(len > 0.0)) throw std::invalid_argument("bridge_grid_max: len must be positive");
  if (depth < 1 || (std::int64_t(1) << depth) > DyadicPath::kMaxGridCells) {
    throw std::invalid_argument("bridge_grid_max: depth out of range");
  }
  const std::uint64_t stream = rng::key(seed, rng::kStreamBridge);
  std::vector<double> row{w_a, w_b};
  std::vector<double> next;
  double best = std::max(w_a, w_b);
  for (std::int32_t h = 1; h <= depth; ++h) {
    const std::int64_t cells = std::int64_t(1) << h;
    next.assign(static_cast<std::size_t>(cells) + 1, 0.0);
    const double seg = std::ldexp(len, 1 - h);
    for (std::int64_t k = 0; k <= cells; ++k) {
      if ((k & 1) == 0) {
        next[k] = row[k >> 1];
      } else {
        const double z = rng::normal(stream, rng::kStreamMidpoint,
                                     static_cast<std::uint64_t>(h),
                                     static_cast<std::uint64_t>(k));
        next[k] = 0.5 * (row[(k - 1) >> 1] + row[(k + 1) >> 1]) + std::sqrt(0.25 * seg) * z;
        best = std::max(best, next[k]);
      }
    }
    row.swap(next);
  }
  return best;
}

FrequencyCheck check_meander_running_min(double u, double eps, double t, std::int32_t depth,
                                         std::int64_t n, std::uint64_t seed0, int jobs) {
  if (!(0.0 < eps && eps < u)) {
    throw std::invalid_argument("check_meander_running_min: need 0 < eps < u");
  }
  if (!(0.0 < t && t <= 1.0)) {
    throw std::invalid_argument("check_meander_running_min: need 0 < t <= 1");
  }
  const double bound = (u - eps) / u;
  const auto cells = static_cast<std::int64_t>(std::ldexp(1.0, depth));
  const auto t_end = static_cast<std::int64_t>(std::round(t * static_cast<double>(cells)));
  return meander_frequency(n, seed0, jobs, bound, [=](std::uint64_t seed) {
    DyadicPath path(seed, DyadicPoint(0, 0), DyadicPoint(0, 1), u);
    const std::vector<double> grid = path.grid_values(depth);
    double run_min = u;
    for (std::int64_t j = 0; j <= t_end; ++j) run_min = std::min(run_min, grid[j]);
    if (!(run_min > 0.0)) return static_cast<unsigned char>(0);
    return static_cast<unsigned char>(2u | (run_min > eps ? 1u : 0u));
  });
}

}  // namespace brownopt
