#include "brownopt/regret.hpp"

#include <stdexcept>

#include "brownopt/closed_form.hpp"

namespace brownopt {

RegretReport score(const RunTrace& trace, const DyadicPoint& recommendation,
                   DyadicPath& path, std::int32_t truth_depth) {
  if (truth_depth < trace.max_query_depth) {
    throw std::invalid_argument(
        "score: truth_depth shallower than the deepest queried point; regret could be negative");
  }
  return score(trace, recommendation, path, path.grid_max(truth_depth));
}

RegretReport score(const RunTrace& trace, const DyadicPoint& recommendation,
                   DyadicPath& path, const MaxRecord& truth) {
  if (trace.queries().empty()) throw std::invalid_argument("score: empty trace");
  if (truth.truth_depth < trace.max_query_depth) {
    throw std::invalid_argument("score: truth record shallower than the deepest queried point");
  }
  RegretReport rep;
  rep.truth = truth;
  rep.recommendation = recommendation;
  rep.truncation_flag = trace.truncated;
  rep.per_query.reserve(trace.queries().size());
  for (const QueryRecord& q : trace.queries()) {
    rep.per_query.push_back(truth.value - path.value(q.point));
    rep.cumulative += rep.per_query.back();
  }
  rep.simple = truth.value - path.value(recommendation);
  rep.discretization_bound =
      eta_bound(std::ldexp(1.0, -truth.truth_depth), trace.params.delta);
  return rep;
}

}  // namespace brownopt
