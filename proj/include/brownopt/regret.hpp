#pragma once

#include <vector>

#include "brownopt/optimizer.hpp"
#include "brownopt/path.hpp"

namespace brownopt {

/// Ground-truth regret accounting for a completed run, measured against
/// the depth-truth_depth grid maximum.  The continuum maximum can exceed
/// the discrete one by at most eta_delta(2^-truth_depth) outside an event
/// of polynomially small probability; that bound is reported per run as
/// discretization_bound rather than folded into the numbers.
struct RegretReport {
  double cumulative = 0.0;              // R_T
  double simple = 0.0;                  // r_T
  std::vector<double> per_query;        // instantaneous regrets, trace order
  MaxRecord truth;
  DyadicPoint recommendation;
  bool truncation_flag = false;
  double discretization_bound = 0.0;
};

RegretReport score(const RunTrace& trace, const DyadicPoint& recommendation,
                   DyadicPath& path, std::int32_t truth_depth);

/// Overload with a precomputed truth record (must come from the same path
/// at the same depth); avoids rescanning the grid across replications.
RegretReport score(const RunTrace& trace, const DyadicPoint& recommendation,
                   DyadicPath& path, const MaxRecord& truth);

}  // namespace brownopt
