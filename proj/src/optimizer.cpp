#include "brownopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "brownopt/closed_form.hpp"
#include "brownopt/rng.hpp"

namespace brownopt {

namespace {
constexpr std::int32_t kMaxEpoch = 45;  // lattice safety margin below DyadicPoint::kMaxDepth
}

std::int64_t n_samples(std::int32_t h, double sigma2) {
  if (h < 0) throw std::invalid_argument("n_samples: h must be >= 0");
  if (sigma2 < 0.0) throw std::invalid_argument("n_samples: sigma2 must be >= 0");
  const double n = std::ceil(sigma2 * std::ldexp(1.0, h + 1));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

double kappa(std::int32_t h, double delta) {
  if (h < 0) throw std::invalid_argument("kappa: h must be >= 0");
  const double w = std::ldexp(1.0, -h);
  return 2.5 * alpha_bound(w, delta) + eta_bound(w, delta);
}

namespace {

const PointStat& stat_at(const AverageMap& averages, const DyadicPoint& p) {
  const auto it = averages.find(p);
  if (it == averages.end() || (!it->second.exact && it->second.count == 0)) {
    throw std::logic_error("confidence bound requested for an unobserved endpoint at " + p.str());
  }
  return it->second;
}

}  // namespace

double ucb(const IntervalRec& interval, const AverageMap& averages,
           const ConfidenceParams& params) {
  const double w = interval.width();
  const double slack = eta_bound(w, params.delta) + alpha_bound(w, params.delta);
  const double lo = stat_at(averages, interval.lo()).mean();
  const double hi = stat_at(averages, interval.hi()).mean();
  return std::max(lo, hi) + slack;
}

double lcb(const IntervalRec& interval, const AverageMap& averages,
           const ConfidenceParams& params) {
  const double w = interval.width();
  const double slack = eta_bound(w, params.delta) + alpha_bound(w, params.delta);
  const double lo = stat_at(averages, interval.lo()).mean();
  const double hi = stat_at(averages, interval.hi()).mean();
  return std::min(lo, hi) - slack;
}

std::vector<IntervalRec> select_candidates(const std::vector<IntervalRec>& intervals,
                                           const AverageMap& averages,
                                           const ConfidenceParams& params) {
  if (intervals.empty()) throw std::logic_error("select_candidates: empty interval set");
  std::vector<double> ucbs;
  ucbs.reserve(intervals.size());
  double best_lcb = -std::numeric_limits<double>::infinity();
  for (const IntervalRec& it : intervals) {
    ucbs.push_back(ucb(it, averages, params));
    best_lcb = std::max(best_lcb, lcb(it, averages, params));
  }
  std::vector<IntervalRec> kept;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (ucbs[i] >= best_lcb) kept.push_back(intervals[i]);
  }
  return kept;
}

std::pair<std::vector<IntervalRec>, std::vector<DyadicPoint>> split(
    const std::vector<IntervalRec>& candidates) {
  std::vector<IntervalRec> children;
  children.reserve(2 * candidates.size());
  std::set<DyadicPoint> points;
  for (const IntervalRec& c : candidates) {
    children.push_back(IntervalRec{c.depth + 1, 2 * c.index});
    children.push_back(IntervalRec{c.depth + 1, 2 * c.index + 1});
    points.insert(DyadicPoint(c.depth + 1, 2 * c.index));
    points.insert(DyadicPoint(c.depth + 1, 2 * c.index + 1));
    points.insert(DyadicPoint(c.depth + 1, 2 * c.index + 2));
  }
  return {std::move(children), std::vector<DyadicPoint>(points.begin(), points.end())};
}

RunTrace run(Sampler& oracle, const ConfidenceParams& params) {
  if (oracle.remaining() != oracle.budget()) {
    throw std::invalid_argument("run: oracle must be fresh (no queries spent)");
  }
  if (params.sigma2 < 0.0) throw std::invalid_argument("run: sigma2 must be >= 0");

  RunTrace trace;
  trace.params = params;
  trace.budget = oracle.budget();

  EpochState& st = trace.state;
  st.intervals = {IntervalRec{0, 0}};
  st.averages[DyadicPoint(0, 0)] = PointStat{0.0, 0, true};  // W_0 = 0 known a.s.

  const auto sample_point = [&](const DyadicPoint& p, std::int64_t want,
                                std::int32_t round) -> bool {
    PointStat& stat = st.averages[p];
    if (stat.exact) return true;
    while (stat.count < want) {
      if (oracle.remaining() == 0) return false;
      const double y = oracle.query(p);
      stat.sum += y;
      ++stat.count;
      ++st.t;
      st.trace.push_back(QueryRecord{p, y, round});
      trace.max_query_depth = std::max(trace.max_query_depth, p.depth);
    }
    return true;
  };

  // Initialization: sample x = 1.  ceil(sigma2) is floored at one sample so
  // the first round's bounds have an observed right endpoint even at
  // sigma2 = 0.
  const std::int64_t n_init =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(params.sigma2)));
  if (!sample_point(DyadicPoint(0, 1), n_init, -1)) {
    trace.truncated = true;
    return trace;
  }

  while (oracle.remaining() > 0) {
    if (st.h >= kMaxEpoch) {
      throw std::runtime_error("run: epoch depth exceeds the lattice cap");
    }
    const std::vector<IntervalRec> cands = select_candidates(st.intervals, st.averages, params);
    auto [children, jpoints] = split(cands);

    RoundSnapshot snap;
    snap.round = st.h;
    snap.intervals = children;

    const std::int64_t want = n_samples(st.h, params.sigma2);
    for (const DyadicPoint& p : jpoints) {
      if (!sample_point(p, want, st.h)) {
        snap.truncated = true;
        trace.truncated = true;
        break;
      }
    }

    snap.j_stats.reserve(jpoints.size());
    for (const DyadicPoint& p : jpoints) {
      const auto it = st.averages.find(p);
      if (it == st.averages.end() || (!it->second.exact && it->second.count == 0)) continue;
      snap.j_stats.push_back(
          RoundPointStat{p, it->second.mean(), it->second.count, it->second.exact});
    }
    trace.rounds.push_back(std::move(snap));
    st.intervals = std::move(children);
    if (!trace.rounds.back().truncated) ++trace.rounds_completed;
    ++st.h;
  }
  return trace;
}

DyadicPoint recommend(const RunTrace& trace, std::uint64_t rng_key, RecommendMode mode) {
  const auto& qs = trace.queries();
  if (qs.empty()) throw std::invalid_argument("recommend: empty trace");
  const std::uint64_t k = rng::key(rng_key, rng::kStreamRecommend);
  if (mode == RecommendMode::kMultiset) {
    return qs[rng::bounded(k, qs.size())].point;
  }
  std::set<DyadicPoint> uniq;
  for (const QueryRecord& q : qs) uniq.insert(q.point);
  std::uint64_t pick = rng::bounded(k, uniq.size());
  auto it = uniq.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(pick));
  return *it;
}

}  // namespace brownopt
