#include "brownopt/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "brownopt/parallel.hpp"
#include "brownopt/rng.hpp"

namespace brownopt {

namespace {

DyadicPoint neg(const DyadicPoint& p) { return DyadicPoint(p.depth, -p.index); }

void validate_shift(const DyadicPoint& delta_shift) {
  if (!(DyadicPoint(0, 0) < delta_shift) || !(delta_shift < DyadicPoint(2, 1))) {
    throw std::invalid_argument("delta_shift must be a dyadic rational in (0, 1/4)");
  }
}

}  // namespace

ShiftedPair::ShiftedPair(std::uint64_t seed, DyadicPoint delta_shift, std::int32_t truth_depth)
    : seed_(seed),
      delta_(delta_shift),
      truth_depth_(truth_depth),
      base_(seed, neg(delta_shift), dyadic_add(DyadicPoint(0, 1), delta_shift), 0.0) {
  validate_shift(delta_shift);
  if (truth_depth < delta_shift.depth) {
    throw std::invalid_argument("ShiftedPair: truth_depth does not resolve delta_shift");
  }
  label_ = (rng::key(seed, rng::kStreamLabel) & 1u) != 0 ? Label::kPlus : Label::kMinus;
  truth_grid_ = base_.grid_values(truth_depth_);
  max_ = base_.grid_max(truth_depth_);
  w_at_delta_ = base_.value(delta_);
}

double ShiftedPair::w_plus(const DyadicPoint& x) {
  return base_.value(dyadic_add(x, delta_)) - w_at_delta_;
}

double ShiftedPair::w_minus(const DyadicPoint& x) {
  return base_.value(dyadic_sub(x, delta_));
}

double ShiftedPair::w_hidden(const DyadicPoint& x) {
  return label_ == Label::kPlus ? w_plus(x) : w_minus(x);
}

double ShiftedPair::r_plus(const DyadicPoint& x) {
  return max_.value - base_.value(dyadic_add(x, delta_));
}

double ShiftedPair::r_minus(const DyadicPoint& x) {
  return max_.value - base_.value(dyadic_sub(x, delta_));
}

double ShiftedPair::r_hidden(const DyadicPoint& x) {
  return label_ == Label::kPlus ? r_plus(x) : r_minus(x);
}

ShiftedPair make_pair(std::uint64_t seed, DyadicPoint delta_shift, std::int32_t truth_depth) {
  return ShiftedPair(seed, delta_shift, truth_depth);
}

PairSampler::PairSampler(ShiftedPair& pair, std::uint64_t noise_seed, double sigma2,
                         std::int64_t budget)
    : pair_(pair), noise_seed_(noise_seed), sigma_(std::sqrt(sigma2)), budget_(budget) {
  if (sigma2 < 0.0) throw std::invalid_argument("PairSampler: sigma2 must be >= 0");
}

double PairSampler::query(const DyadicPoint& p) {
  if (spent_ >= budget_) throw BudgetError();
  if (p < DyadicPoint(0, 0) || DyadicPoint(0, 1) < p) {
    throw std::domain_error("PairSampler: query outside [0, 1]");
  }
  const double w = pair_.w_hidden(p);
  const double y = w + sigma_ * rng::normal(noise_seed_, rng::kStreamNoise,
                                            static_cast<std::uint64_t>(spent_));
  ++spent_;
  return y;
}

EventTReport check_event_T(ShiftedPair& pair, double delta, std::int32_t grid_depth,
                           double c4) {
  const DyadicPoint& shift = pair.delta_shift();
  if (grid_depth < shift.depth || grid_depth > pair.truth_depth()) {
    throw std::invalid_argument(
        "check_event_T: grid_depth must resolve delta_shift and not exceed the truth depth");
  }
  EventTReport rep;
  rep.c4 = c4;
  rep.x_max = pair.argmax();

  const DyadicPoint two_delta = dyadic_add(shift, shift);
  rep.t1 = two_delta < rep.x_max && rep.x_max < dyadic_sub(DyadicPoint(0, 1), two_delta);

  const double delta_value = shift.value();
  rep.t2_threshold = rep.c3 * delta * delta * std::sqrt(delta_value);
  rep.t3_threshold = c4 * std::sqrt(delta_value * std::log(1.0 / delta_value));

  // Base-lattice scan: x = j/2^g has W~(x - Delta) at offset j and
  // W~(x + Delta) at offset j + 2*shift_cells on the [-Delta, 1+Delta] grid.
  const std::vector<double>& grid =
      grid_depth == pair.truth_depth() ? pair.truth_grid() : pair.base().grid_values(grid_depth);
  const std::int64_t cells = std::int64_t(1) << grid_depth;
  const std::int64_t shift_cells = shift.index << (grid_depth - shift.depth);
  const double m = pair.max_value();

  double t2_min = std::numeric_limits<double>::infinity();
  double t3_max = -1.0;
  std::int64_t t2_arg = 0, t3_arg = 0;
  for (std::int64_t j = 0; j <= cells; ++j) {
    const double r_minus = m - grid[static_cast<std::size_t>(j)];
    const double r_plus = m - grid[static_cast<std::size_t>(j + 2 * shift_cells)];
    const double worse = std::max(r_plus, r_minus);
    if (worse < t2_min) { t2_min = worse; t2_arg = j; }
    const double diff = std::abs(r_plus - r_minus);
    if (diff > t3_max) { t3_max = diff; t3_arg = j; }
  }
  rep.t2_value = t2_min;
  rep.t2_witness = DyadicPoint(grid_depth, t2_arg);
  rep.t2 = t2_min >= rep.t2_threshold;
  rep.t3_value = t3_max;
  rep.t3_witness = DyadicPoint(grid_depth, t3_arg);
  rep.t3 = t3_max <= rep.t3_threshold;
  return rep;
}

double mi_surrogate(ShiftedPair& pair, std::span<const DyadicPoint> queries, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw std::domain_error("mi_surrogate: sigma2 must be positive (the bound needs noise)");
  }
  double sum = 0.0;
  for (const DyadicPoint& p : queries) {
    const double d = pair.r_plus(p) - pair.r_minus(p);
    sum += d * d;
  }
  return sum / (2.0 * sigma2);
}

double mi_surrogate(ShiftedPair& pair, const RunTrace& trace, double sigma2) {
  std::vector<DyadicPoint> pts;
  pts.reserve(trace.queries().size());
  for (const QueryRecord& q : trace.queries()) pts.push_back(q.point);
  return mi_surrogate(pair, pts, sigma2);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0, 1]");
  double h = 0.0;
  if (p > 0.0) h += p * std::log(1.0 / p);
  if (p < 1.0) h += (1.0 - p) * std::log(1.0 / (1.0 - p));
  return h;
}

double binary_entropy_inverse(double value) {
  const double ln2 = std::numbers::ln2;
  if (value <= 0.0) return 0.0;
  if (value >= ln2) return 0.5;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) < value) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double fano_floor(double mi, double delta, DyadicPoint delta_shift) {
  if (mi < 0.0) throw std::invalid_argument("fano_floor: mi must be >= 0");
  validate_shift(delta_shift);
  const double rest = std::max(0.0, std::numbers::ln2 - mi);
  return kEventTC3 * delta * delta * std::sqrt(delta_shift.value()) *
         binary_entropy_inverse(rest);
}

DyadicPoint delta_schedule(double c, std::int64_t budget) {
  if (!(c > 0.0) || budget < 2) {
    throw std::invalid_argument("delta_schedule: need c > 0 and budget >= 2");
  }
  const double target = c / (static_cast<double>(budget) *
                             std::log(static_cast<double>(budget)));
  int e = static_cast<int>(std::lround(std::log2(target)));
  e = std::min(e, -3);   // keep Delta < 1/4
  e = std::max(e, -30);  // lattice resolution guard
  return DyadicPoint(-e, 1);
}

AlgorithmFn algorithm_confidence_bound() {
  return [](Sampler& oracle, const LowerBoundRunSpec& spec) {
    const ConfidenceParams params = ConfidenceParams::preset(spec.budget, spec.sigma2);
    const RunTrace trace = run(oracle, params);
    AlgorithmOutcome out;
    out.queries.reserve(trace.queries().size());
    for (const QueryRecord& q : trace.queries()) out.queries.push_back(q.point);
    out.recommendation = recommend(trace, spec.seed);
    return out;
  };
}

AlgorithmFn algorithm_random_search(std::int32_t grid_depth) {
  return [grid_depth](Sampler& oracle, const LowerBoundRunSpec& spec) {
    AlgorithmOutcome out;
    std::unordered_map<DyadicPoint, PointStat, DyadicPointHash> stats;
    const std::uint64_t cells = std::uint64_t(1) << grid_depth;
    for (std::int64_t t = 0; oracle.remaining() > 0; ++t) {
      const std::uint64_t j = rng::bounded(
          rng::key(spec.seed, rng::kStreamScratch, static_cast<std::uint64_t>(t)), cells + 1);
      const DyadicPoint p(grid_depth, static_cast<std::int64_t>(j));
      const double y = oracle.query(p);
      PointStat& st = stats[p];
      st.sum += y;
      ++st.count;
      out.queries.push_back(p);
    }
    if (out.queries.empty()) throw std::invalid_argument("random search: zero budget");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [p, st] : stats) {
      const double m = st.mean();
      if (m > best || (m == best && p < out.recommendation)) {
        best = m;
        out.recommendation = p;
      }
    }
    return out;
  };
}

HypothesisTestSummary hypothesis_test_regret(const AlgorithmFn& algorithm,
                                             DyadicPoint delta_shift, double sigma2,
                                             std::int64_t budget,
                                             std::span<const std::uint64_t> seeds,
                                             const HypothesisTestOptions& options) {
  validate_shift(delta_shift);
  if (seeds.empty()) throw std::invalid_argument("hypothesis_test_regret: no seeds");
  const std::int32_t truth_depth =
      options.truth_depth > 0 ? options.truth_depth : delta_shift.depth + 2;
  const std::int32_t grid_depth = options.grid_depth > 0 ? options.grid_depth : truth_depth;

  struct PerSeed {
    bool certified = false;
    double regret = 0.0;
    double mi = 0.0;
  };
  std::vector<PerSeed> rows(seeds.size());
  parallel_for(static_cast<std::int64_t>(seeds.size()), options.jobs, [&](std::int64_t i) {
    const std::uint64_t seed = seeds[static_cast<std::size_t>(i)];
    ShiftedPair pair = make_pair(seed, delta_shift, truth_depth);
    PairSampler sampler(pair, rng::key(seed, rng::kStreamScratch, 0xBADCAFE), sigma2, budget);
    LowerBoundRunSpec spec{budget, sigma2, options.delta, seed, &pair};
    const AlgorithmOutcome outcome = algorithm(sampler, spec);
    PerSeed& row = rows[static_cast<std::size_t>(i)];
    row.certified = check_event_T(pair, options.delta, grid_depth, options.c4).all();
    row.regret = pair.r_hidden(outcome.recommendation);
    row.mi = mi_surrogate(pair, outcome.queries, sigma2);
  });

  HypothesisTestSummary s;
  s.n_seeds = static_cast<std::int64_t>(seeds.size());
  s.delta = options.delta;
  s.delta_shift = delta_shift;
  for (const PerSeed& row : rows) {
    if (!row.certified) continue;
    ++s.n_certified;
    s.mean_regret_certified += row.regret;
    s.mean_mi_certified += row.mi;
  }
  if (s.n_certified > 0) {
    s.mean_regret_certified /= static_cast<double>(s.n_certified);
    s.mean_mi_certified /= static_cast<double>(s.n_certified);
  }
  s.floor = fano_floor(s.mean_mi_certified, options.delta, delta_shift);
  s.floor_respected = s.n_certified > 0 && s.mean_regret_certified >= s.floor;
  return s;
}

}  // namespace brownopt
