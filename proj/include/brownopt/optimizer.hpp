#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "brownopt/dyadic.hpp"
#include "brownopt/oracle.hpp"

namespace brownopt {

struct ConfidenceParams {
  double delta = 0.1;   // confidence-bound failure probability
  double sigma2 = 0.0;  // observation noise variance

  /// The algorithm's preset for a known horizon: delta = T^(-1/2).
  static ConfidenceParams preset(std::int64_t budget, double sigma2) {
    return ConfidenceParams{1.0 / std::sqrt(static_cast<double>(budget)), sigma2};
  }
};

/// Lattice interval I = [index/2^depth, (index+1)/2^depth].
struct IntervalRec {
  std::int32_t depth = 0;
  std::int64_t index = 0;

  DyadicPoint lo() const { return DyadicPoint(depth, index); }
  DyadicPoint hi() const { return DyadicPoint(depth, index + 1); }
  double width() const { return std::ldexp(1.0, -depth); }

  friend bool operator==(const IntervalRec&, const IntervalRec&) = default;
};

/// Running observation statistics at one lattice point.  `exact` marks a
/// point whose value is known a priori (the anchor W_0 = 0), which
/// participates in the confidence bounds with zero uncertainty and is
/// never sampled.
struct PointStat {
  double sum = 0.0;
  std::int64_t count = 0;
  bool exact = false;

  double mean() const { return exact ? sum : sum / static_cast<double>(count); }
};

using AverageMap = std::unordered_map<DyadicPoint, PointStat, DyadicPointHash>;

struct QueryRecord {
  DyadicPoint point;
  double observed = 0.0;
  std::int32_t round = 0;  // sampling round; -1 for initialization queries
};

/// State of the epoch loop: current interval set, pooled averages, spent
/// budget and the ordered query trace.
struct EpochState {
  std::int32_t h = 0;
  std::vector<IntervalRec> intervals;
  AverageMap averages;
  std::int64_t t = 0;
  std::vector<QueryRecord> trace;
};

struct RoundPointStat {
  DyadicPoint point;
  double mean = 0.0;
  std::int64_t count = 0;
  bool exact = false;
};

/// What round h produced: the split interval set I_{h+1} and the sampled
/// point set J_{h+1} with its post-round pooled statistics.
struct RoundSnapshot {
  std::int32_t round = 0;
  std::vector<IntervalRec> intervals;
  std::vector<RoundPointStat> j_stats;
  bool truncated = false;
};

struct RunTrace {
  EpochState state;  // final
  std::vector<RoundSnapshot> rounds;
  ConfidenceParams params;
  std::int64_t budget = 0;
  bool truncated = false;
  std::int32_t rounds_completed = 0;
  std::int32_t max_query_depth = 0;

  const std::vector<QueryRecord>& queries() const { return state.trace; }
};

/// n_h = ceil(sigma2 * 2^(h+1)), floored at one sample.
std::int64_t n_samples(std::int32_t h, double sigma2);

/// kappa_h = (5/2) alpha_delta(2^-h) + eta_delta(2^-h): per-point regret
/// scale of round h under the confidence-bound event.
double kappa(std::int32_t h, double delta);

double ucb(const IntervalRec& interval, const AverageMap& averages,
           const ConfidenceParams& params);
double lcb(const IntervalRec& interval, const AverageMap& averages,
           const ConfidenceParams& params);

/// Intervals whose UCB reaches the best LCB.  Never empty: the argmax-LCB
/// interval always qualifies.
std::vector<IntervalRec> select_candidates(const std::vector<IntervalRec>& intervals,
                                           const AverageMap& averages,
                                           const ConfidenceParams& params);

/// Halve every candidate; returns the child intervals and the canonically
/// deduplicated, position-sorted point set {a, m, b}.
std::pair<std::vector<IntervalRec>, std::vector<DyadicPoint>> split(
    const std::vector<IntervalRec>& candidates);

/// Runs the epoch loop against the oracle until the budget is exhausted.
/// Mid-round truncation stops at the exact query where the budget hits T
/// and is flagged on both the run and the affected round.
RunTrace run(Sampler& oracle, const ConfidenceParams& params);

enum class RecommendMode {
  kMultiset,   // uniform over the T queries (with multiplicity)
  kUniqueSet,  // uniform over the distinct queried points
};

DyadicPoint recommend(const RunTrace& trace, std::uint64_t rng_key,
                      RecommendMode mode = RecommendMode::kMultiset);

}  // namespace brownopt
