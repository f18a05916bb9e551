#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "brownopt/dyadic.hpp"
#include "brownopt/optimizer.hpp"
#include "brownopt/oracle.hpp"
#include "brownopt/path.hpp"

namespace brownopt {

/// c3 of the interior-event definition (the appendix derives it as 0.01*sqrt(2)).
inline constexpr double kEventTC3 = 0.014142135623730951;  // 0.01 * sqrt(2)

/// c4 of the regret-closeness event, calibrated once as the smallest
/// constant certifying T3 on 99% of 10^4 seeds at Delta = 2^-8 (depth-12
/// scan grid), then frozen.
inline constexpr double kEventTC4 = 2.70;

/// The genie pair: a base path W~ on [-Delta, 1+Delta] anchored at 0, a
/// hidden equiprobable label V, and the two shifted views
///   W+(x) = W~(x+Delta) - W~(Delta),   W-(x) = W~(x-Delta).
/// Regret functions are measured against the grid maximum of W~ at the
/// declared truth depth.  Label-blind algorithms must interact with the
/// pair only through PairSampler.
class ShiftedPair {
 public:
  enum class Label { kPlus, kMinus };

  ShiftedPair(std::uint64_t seed, DyadicPoint delta_shift, std::int32_t truth_depth);

  std::uint64_t seed() const { return seed_; }
  const DyadicPoint& delta_shift() const { return delta_; }
  std::int32_t truth_depth() const { return truth_depth_; }
  Label label() const { return label_; }  // hidden from honest algorithms

  double w_plus(const DyadicPoint& x);
  double w_minus(const DyadicPoint& x);
  double w_hidden(const DyadicPoint& x);

  /// r+(x) = M+ - W+(x) and r-(x) = M- - W-(x); both reduce to
  /// M - W~(x -+ Delta), which is evaluated verbatim so the shift identity
  /// r-(x) = r+(x - 2 Delta) holds exactly.
  double r_plus(const DyadicPoint& x);
  double r_minus(const DyadicPoint& x);
  double r_hidden(const DyadicPoint& x);

  double max_value() const { return max_.value; }       // M
  const DyadicPoint& argmax() const { return max_.argmax; }  // x_M in [-Delta, 1+Delta]
  double m_plus() const { return max_.value - w_at_delta_; }
  double m_minus() const { return max_.value; }

  DyadicPath& base() { return base_; }
  /// Base-path values on the truth-depth lattice of [-Delta, 1+Delta].
  const std::vector<double>& truth_grid() const { return truth_grid_; }

 private:
  std::uint64_t seed_;
  DyadicPoint delta_;
  std::int32_t truth_depth_;
  DyadicPath base_;
  Label label_;
  std::vector<double> truth_grid_;
  MaxRecord max_;
  double w_at_delta_ = 0.0;
};

ShiftedPair make_pair(std::uint64_t seed, DyadicPoint delta_shift, std::int32_t truth_depth);

/// Noisy oracle over the hidden shifted path, restricted to [0, 1].
class PairSampler final : public Sampler {
 public:
  PairSampler(ShiftedPair& pair, std::uint64_t noise_seed, double sigma2, std::int64_t budget);

  double query(const DyadicPoint& p) override;
  std::int64_t budget() const override { return budget_; }
  std::int64_t remaining() const override { return budget_ - spent_; }

 private:
  ShiftedPair& pair_;
  std::uint64_t noise_seed_;
  double sigma_;
  std::int64_t budget_;
  std::int64_t spent_ = 0;
};

struct EventTReport {
  bool t1 = false;  // 2 Delta < x_M < 1 - 2 Delta
  bool t2 = false;  // min_x max(r+, r-) >= c3 delta^2 sqrt(Delta)
  bool t3 = false;  // max_x |r+ - r-| <= c4 sqrt(Delta ln(1/Delta))
  DyadicPoint x_max;
  DyadicPoint t2_witness;  // argmin of max(r+, r-)
  double t2_value = 0.0;
  double t2_threshold = 0.0;
  DyadicPoint t3_witness;  // argmax of |r+ - r-|
  double t3_value = 0.0;
  double t3_threshold = 0.0;
  double c3 = kEventTC3;
  double c4 = kEventTC4;

  bool all() const { return t1 && t2 && t3; }
};

/// Evaluates the three sub-events on the depth-`grid_depth` lattice of
/// [0, 1] (which must resolve Delta and not exceed the pair's truth
/// depth).  The discrete min in T2 can only overestimate certification,
/// which is the conservative direction for the Fano test downstream.
EventTReport check_event_T(ShiftedPair& pair, double delta, std::int32_t grid_depth,
                           double c4 = kEventTC4);

/// Per-query KL surrogate: sum over queried points of
/// (r+(x) - r-(x))^2 / (2 sigma2).  Needs sigma2 > 0.
double mi_surrogate(ShiftedPair& pair, std::span<const DyadicPoint> queries, double sigma2);
double mi_surrogate(ShiftedPair& pair, const RunTrace& trace, double sigma2);

double binary_entropy(double p);
/// Inverse of the binary entropy on [0, ln 2] -> [0, 1/2], bisected to
/// 1e-12 absolute tolerance.
double binary_entropy_inverse(double value);

/// c3 delta^2 sqrt(Delta) * H2^{-1}(max(0, ln 2 - mi)).
double fano_floor(double mi, double delta, DyadicPoint delta_shift);

/// Nearest power of two to c / (T ln T), clamped to a valid shift.
DyadicPoint delta_schedule(double c, std::int64_t budget);

struct LowerBoundRunSpec {
  std::int64_t budget = 0;
  double sigma2 = 0.0;
  double delta = 0.5;
  std::uint64_t seed = 0;        // per-replication seed (recommendation draws etc.)
  const ShiftedPair* pair = nullptr;  // for label-aware sanity baselines only
};

struct AlgorithmOutcome {
  std::vector<DyadicPoint> queries;
  DyadicPoint recommendation;
};

using AlgorithmFn = std::function<AlgorithmOutcome(Sampler&, const LowerBoundRunSpec&)>;

/// The epoch-based optimizer with its multiset recommendation rule.
AlgorithmFn algorithm_confidence_bound();
/// Uniform random queries on the depth-`grid_depth` lattice; recommends the
/// best empirical mean.
AlgorithmFn algorithm_random_search(std::int32_t grid_depth);

struct HypothesisTestSummary {
  std::int64_t n_seeds = 0;
  std::int64_t n_certified = 0;
  double mean_regret_certified = 0.0;
  double mean_mi_certified = 0.0;
  double floor = 0.0;
  bool floor_respected = false;  // mean_regret_certified >= floor
  double delta = 0.0;
  DyadicPoint delta_shift;
};

struct HypothesisTestOptions {
  double delta = 0.5;
  std::int32_t truth_depth = 0;  // 0: delta_shift depth + 2
  std::int32_t grid_depth = 0;   // 0: same as truth_depth
  double c4 = kEventTC4;
  int jobs = 1;
};

/// Runs the algorithm label-blind against shifted pairs, measures the mean
/// simple regret restricted to event-T-certified realizations, and compares
/// it against the Fano floor computed from the mean realized MI surrogate.
HypothesisTestSummary hypothesis_test_regret(const AlgorithmFn& algorithm,
                                             DyadicPoint delta_shift, double sigma2,
                                             std::int64_t budget,
                                             std::span<const std::uint64_t> seeds,
                                             const HypothesisTestOptions& options = {});

}  // namespace brownopt
