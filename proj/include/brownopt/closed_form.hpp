#pragma once

#include <cmath>
#include <stdexcept>

namespace brownopt {

/// eta_delta(x) = sqrt((5x/2) ln(2/(x delta))): high-probability bound on
/// the excursion of the path above the endpoints of an interval of length x.
/// Requires the log argument to exceed 1; no clamping (a silently clamped
/// bound would corrupt the confidence level).
inline double eta_bound(double x, double delta) {
  if (!(x > 0.0) || !(x <= 1.0)) throw std::domain_error("eta_bound: x must be in (0,1]");
  if (!(delta > 0.0) || !(delta <= 1.0)) throw std::domain_error("eta_bound: delta must be in (0,1]");
  const double arg = 2.0 / (x * delta);
  if (!(arg > 1.0)) throw std::domain_error("eta_bound: log argument <= 1");
  return std::sqrt(2.5 * x * std::log(arg));
}

/// alpha_delta(x) = sqrt(6x ln(1/(x delta))): bound on both the lattice
/// increment at scale x and the averaged-noise deviation.
inline double alpha_bound(double x, double delta) {
  if (!(x > 0.0) || !(x <= 1.0)) throw std::domain_error("alpha_bound: x must be in (0,1]");
  if (!(delta > 0.0) || !(delta <= 1.0)) throw std::domain_error("alpha_bound: delta must be in (0,1]");
  const double arg = 1.0 / (x * delta);
  if (!(arg > 1.0)) throw std::domain_error("alpha_bound: log argument <= 1");
  return std::sqrt(6.0 * x * std::log(arg));
}

/// P[max bridge > y | endpoints w_a, w_b over an interval of length len]
/// = exp(-2 (y - w_a)(y - w_b) / len) for y >= max(w_a, w_b).
/// Below both endpoints the exceedance is certain; returns 1 by convention.
inline double bridge_max_survival(double w_a, double w_b, double len, double y) {
  if (!(len > 0.0)) throw std::domain_error("bridge_max_survival: len must be positive");
  if (y < w_a && y < w_b) return 1.0;
  const double p = std::exp(-2.0 * (y - w_a) * (y - w_b) / len);
  return p > 1.0 ? 1.0 : p;
}

}  // namespace brownopt
