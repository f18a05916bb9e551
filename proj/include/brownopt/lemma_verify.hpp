#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "brownopt/optimizer.hpp"
#include "brownopt/path.hpp"

namespace brownopt {

/// Truncated evaluation of the confidence-bound events over a completed
/// run.  Every boolean is decided by finitely many comparisons on the
/// depth-H_check lattice; the truncated events are implied by their
/// untruncated counterparts, so the checker can over-certify but never
/// under-certify.
struct EventMReport {
  bool m1 = true;       // lattice increments within alpha_delta
  bool m2 = true;       // pooled averages within alpha_delta of the path
  bool m3 = true;       // interval sup within UCB
  bool m4 = true;       // interval inf within LCB
  bool c_event = true;  // sup within max(endpoints) + eta_delta, all intervals
  bool c_prime = true;  // inf within min(endpoints) - eta_delta
  std::int32_t h_check = 0;
  double delta = 0.0;
  bool delta_warning = false;  // delta >= 1/3: outside the event bound's range

  bool m() const { return m1 && m2 && m3 && m4; }
};

EventMReport check_event_M(DyadicPath& path, const RunTrace& trace, double delta,
                           std::int32_t h_check);

/// |{k in {0..2^h} : W_{k/2^h} >= M - eta_gap}| with M the depth-h grid max.
std::int64_t count_near_optimal(DyadicPath& path, std::int32_t depth, double eta_gap);

struct GapQuantileRow {
  double q = 0.0;          // quantile defining the event A = {Gap >= q-quantile}
  double prob = 0.0;       // P[A] = 1 - q
  double scale = 0.0;      // sqrt(log(1/P[A]))
  double cond_mean = 0.0;  // E[Gap | A]
};

struct GapBoundReport {
  double mean = 0.0;  // unconditional E[Gap]
  std::vector<GapQuantileRow> rows;
  // Least-squares fit cond_mean = intercept + growth_coef * scale; growth
  // proportional to sqrt(log(1/P[A])) shows up as growth_coef near 1.
  double growth_coef = 0.0;
  double intercept = 0.0;
};

GapBoundReport check_gap_bound(std::span<const std::uint64_t> seeds, std::int32_t depth,
                               std::span<const double> quantiles);

/// One-sided Monte Carlo frequency with the bound it is checked against.
struct FrequencyCheck {
  double frequency = 0.0;
  double bound = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;          // conditioned sample count
  std::int64_t n_total = 0;    // generated sample count
  bool holds(double slack_se = 3.0) const {
    return frequency >= bound - slack_se * std_error;
  }
};

/// P[max_{[0,s]} W >= x | min over the grid of (0,t] > 0, W_0 = 0],
/// estimated on the depth-`depth` lattice, against the meander running-max
/// bound (two branches around t = 2s).
FrequencyCheck check_meander_running_max(double s, double t, double x, std::int32_t depth,
                                         std::int64_t n, std::uint64_t seed0, int jobs = 1);

/// P[min_{[0,t]} W > eps | min > 0, W_0 = u] against the bound (u - eps)/u.
FrequencyCheck check_meander_running_min(double u, double eps, double t, std::int32_t depth,
                                         std::int64_t n, std::uint64_t seed0, int jobs = 1);

/// Maximum over the depth-`depth` lattice of a Brownian bridge of length
/// `len` pinned at (w_a, w_b), built by keyed midpoint displacement.
double bridge_grid_max(std::uint64_t seed, double w_a, double w_b, double len,
                       std::int32_t depth);

}  // namespace brownopt
