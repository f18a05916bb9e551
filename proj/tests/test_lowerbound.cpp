#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "brownopt/lowerbound.hpp"
#include "brownopt/rng.hpp"

using namespace brownopt;

TEST_CASE("the plus view is pinned to zero at the origin, the minus view to the anchor") {
  const DyadicPoint delta(8, 1);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    ShiftedPair pair = make_pair(seed, delta, 12);
    CHECK(pair.w_plus(DyadicPoint(0, 0)) == 0.0);
    CHECK(pair.w_minus(DyadicPoint(0, 0)) == 0.0);
  }
}

TEST_CASE("shift parameter validation") {
  CHECK_THROWS_AS(make_pair(1, DyadicPoint(2, 1), 12), std::invalid_argument);  // 1/4
  CHECK_THROWS_AS(make_pair(1, DyadicPoint(0, 0), 12), std::invalid_argument);  // 0
  CHECK_THROWS_AS(make_pair(1, DyadicPoint(1, 1), 12), std::invalid_argument);  // 1/2
  CHECK_THROWS_AS(make_pair(1, DyadicPoint(10, 1), 5), std::invalid_argument);  // unresolved
}

TEST_CASE("hidden labels are equiprobable across seeds") {
  const DyadicPoint delta(10, 1);
  int plus = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    if ((rng::key(static_cast<std::uint64_t>(i), rng::kStreamLabel) & 1u) != 0) ++plus;
  }
  const double freq = static_cast<double>(plus) / n;
  CHECK(std::abs(freq - 0.5) < 0.015);
  // and the pair surface agrees with the stream
  ShiftedPair pair = make_pair(123, delta, 12);
  const bool bit = (rng::key(123, rng::kStreamLabel) & 1u) != 0;
  CHECK((pair.label() == ShiftedPair::Label::kPlus) == bit);
}

TEST_CASE("the regret functions satisfy the exact shift identity") {
  const DyadicPoint delta(6, 1);
  const DyadicPoint two_delta = dyadic_add(delta, delta);
  ShiftedPair pair = make_pair(99, delta, 12);
  for (std::int64_t k = 0; k <= (1 << 6); ++k) {
    const DyadicPoint x(6, k);
    if (x < two_delta) continue;  // r+ argument must stay in [0,1]
    const DyadicPoint shifted = dyadic_sub(x, two_delta);
    CHECK(pair.r_minus(x) == pair.r_plus(shifted));
  }
  // pointwise difference identity, up to roundoff:
  // W^-(x) - W^+(x) = W~(x-D) - W~(x+D) + W~(D)
  const double w_at_delta = pair.base().value(delta);
  for (std::int64_t k = 0; k <= (1 << 6); ++k) {
    const DyadicPoint x(6, k);
    const double lhs = pair.w_minus(x) - pair.w_plus(x);
    const double rhs = pair.base().value(dyadic_sub(x, delta)) -
                       pair.base().value(dyadic_add(x, delta)) + w_at_delta;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("regret functions are nonnegative on the grid and vanish at the shifted argmax") {
  const DyadicPoint delta(8, 1);
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    ShiftedPair pair = make_pair(seed, delta, 12);
    for (std::int64_t k = 0; k <= (1 << 8); k += 7) {
      const DyadicPoint x(8, k);
      CHECK(pair.r_plus(x) >= 0.0);
      CHECK(pair.r_minus(x) >= 0.0);
    }
    const EventTReport rep = check_event_T(pair, 0.5, 12);
    if (rep.t1) {
      // both shifted argmaxes land inside [0, 1] and carry zero regret
      const DyadicPoint x_plus = dyadic_sub(pair.argmax(), delta);
      const DyadicPoint x_minus = dyadic_add(pair.argmax(), delta);
      CHECK(DyadicPoint(0, 0) <= x_plus);
      CHECK(x_minus <= DyadicPoint(0, 1));
      CHECK(pair.r_plus(x_plus) == 0.0);
      CHECK(pair.r_minus(x_minus) == 0.0);
    }
    if (rep.t2) {
      // separation: no grid point has both regrets under the threshold
      bool both_below = false;
      for (std::int64_t k = 0; k <= (1 << 8); ++k) {
        const DyadicPoint x(8, k);
        if (pair.r_plus(x) < rep.t2_threshold && pair.r_minus(x) < rep.t2_threshold) {
          both_below = true;
        }
      }
      CHECK(!both_below);
    }
  }
}

TEST_CASE("event T1 fails most of the time when the shift nearly fills the domain") {
  const DyadicPoint delta(5, 7);  // 7/32, close to 1/4: interior window is thin
  int t1 = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    ShiftedPair pair = make_pair(3000 + static_cast<std::uint64_t>(i), delta, 12);
    if (check_event_T(pair, 0.5, 12).t1) ++t1;
  }
  CHECK(static_cast<double>(t1) / n < 0.5);
}

TEST_CASE("the T3 verdict follows the c4 threshold") {
  const DyadicPoint delta(8, 1);
  ShiftedPair pair = make_pair(77, delta, 12);
  const EventTReport loose = check_event_T(pair, 0.5, 12, 1e9);
  CHECK(loose.t3);
  CHECK(loose.t3_value >= 0.0);
  const EventTReport tight = check_event_T(pair, 0.5, 12, 0.0);
  CHECK(!tight.t3);  // a zero threshold rejects any nonzero difference
  CHECK(loose.t3_value == tight.t3_value);
  CHECK_THROWS_AS(check_event_T(pair, 0.5, 14), std::invalid_argument);  // beyond truth depth
}

TEST_CASE("mi surrogate: zero for empty traces, exact for one query, noise required") {
  const DyadicPoint delta(8, 1);
  ShiftedPair pair = make_pair(42, delta, 12);
  CHECK(mi_surrogate(pair, std::vector<DyadicPoint>{}, 0.5) == 0.0);
  const DyadicPoint x(3, 3);
  const double gap = pair.r_plus(x) - pair.r_minus(x);
  const std::vector<DyadicPoint> one{x};
  CHECK(mi_surrogate(pair, one, 0.5) == doctest::Approx(gap * gap).epsilon(1e-12));
  CHECK_THROWS_AS(mi_surrogate(pair, one, 0.0), std::domain_error);
}

TEST_CASE("on T3-certified pairs the surrogate obeys the per-query cap for grid traces") {
  const DyadicPoint delta(10, 1);
  const double sigma2 = 0.5;
  const std::int64_t T = 200;
  int tested = 0;
  for (std::uint64_t seed = 500; seed < 520; ++seed) {
    ShiftedPair pair = make_pair(seed, delta, 12);
    const EventTReport rep = check_event_T(pair, 0.5, 12);
    if (!rep.t3) continue;
    ++tested;
    PairSampler sampler(pair, seed, sigma2, T);
    const AlgorithmOutcome out =
        algorithm_random_search(12)(sampler, LowerBoundRunSpec{T, sigma2, 0.5, seed, &pair});
    const double mi = mi_surrogate(pair, out.queries, sigma2);
    const double cap = static_cast<double>(T) * rep.t3_threshold * rep.t3_threshold /
                       (2.0 * sigma2);
    CHECK(mi <= cap);
  }
  CHECK(tested > 0);
}

TEST_CASE("binary entropy and its inverse") {
  CHECK(binary_entropy(0.5) == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(std::abs(binary_entropy_inverse(binary_entropy(0.11)) - 0.11) < 1e-10);
  CHECK(std::abs(binary_entropy_inverse(binary_entropy(0.37)) - 0.37) < 1e-10);
  CHECK(binary_entropy_inverse(0.0) == 0.0);
  CHECK(binary_entropy_inverse(std::numbers::ln2) == 0.5);
  CHECK_THROWS_AS(binary_entropy(1.5), std::domain_error);
}

TEST_CASE("fano floor endpoints and monotonicity") {
  const DyadicPoint delta(10, 1);
  const double full = fano_floor(0.0, 0.5, delta);
  CHECK(full == doctest::Approx(kEventTC3 * 0.25 * std::sqrt(delta.value()) * 0.5)
                    .epsilon(1e-9));
  CHECK(fano_floor(std::numbers::ln2, 0.5, delta) == 0.0);
  CHECK(fano_floor(10.0, 0.5, delta) == 0.0);
  double prev = full;
  for (double mi = 0.1; mi < 0.8; mi += 0.1) {
    const double f = fano_floor(mi, 0.5, delta);
    CHECK(f <= prev);
    prev = f;
  }
  CHECK_THROWS_AS(fano_floor(-0.1, 0.5, delta), std::invalid_argument);
}

TEST_CASE("the schedule rounds to a dyadic shift") {
  CHECK(delta_schedule(1.0, 1000) == DyadicPoint(13, 1));
  CHECK(delta_schedule(1e6, 1000) == DyadicPoint(3, 1));   // clamp below 1/4
  CHECK(delta_schedule(1e-12, 1000) == DyadicPoint(30, 1));  // resolution guard
  CHECK_THROWS_AS(delta_schedule(0.0, 1000), std::invalid_argument);
}

TEST_CASE("a label-aware genie can defeat the Fano floor") {
  const AlgorithmFn genie = [](Sampler&, const LowerBoundRunSpec& spec) {
    // reads the hidden label and recommends the shifted argmax directly
    const ShiftedPair& pair = *spec.pair;
    DyadicPoint rec = pair.label() == ShiftedPair::Label::kPlus
                          ? dyadic_sub(pair.argmax(), pair.delta_shift())
                          : dyadic_add(pair.argmax(), pair.delta_shift());
    if (rec < DyadicPoint(0, 0)) rec = DyadicPoint(0, 0);
    if (DyadicPoint(0, 1) < rec) rec = DyadicPoint(0, 1);
    return AlgorithmOutcome{{}, rec};
  };
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 150; ++s) seeds.push_back(7000 + s);
  HypothesisTestOptions options;
  options.truth_depth = 12;
  const HypothesisTestSummary sum =
      hypothesis_test_regret(genie, DyadicPoint(10, 1), 0.5, 50, seeds, options);
  REQUIRE(sum.n_certified > 0);
  CHECK(sum.mean_regret_certified == 0.0);  // exact: r vanishes at the shifted argmax
  CHECK(sum.floor > 0.0);                   // no queries, so the surrogate is zero
  CHECK(!sum.floor_respected);
}

TEST_CASE("label-blind baselines respect the floor (small sample)") {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 100; ++s) seeds.push_back(9000 + s);
  HypothesisTestOptions options;
  options.truth_depth = 13;
  const HypothesisTestSummary rs = hypothesis_test_regret(
      algorithm_random_search(10), DyadicPoint(10, 1), 0.5, 1000, seeds, options);
  CHECK(rs.n_certified > 80);
  CHECK(rs.floor_respected);
  const HypothesisTestSummary cb = hypothesis_test_regret(
      algorithm_confidence_bound(), DyadicPoint(10, 1), 0.5, 1000, seeds, options);
  CHECK(cb.n_certified > 80);
  CHECK(cb.floor_respected);
}

TEST_CASE("hypothesis test results are schedule-independent of the thread count") {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 60; ++s) seeds.push_back(11000 + s);
  HypothesisTestOptions serial;
  serial.truth_depth = 12;
  serial.jobs = 1;
  HypothesisTestOptions parallel = serial;
  parallel.jobs = 4;
  const HypothesisTestSummary a = hypothesis_test_regret(
      algorithm_random_search(10), DyadicPoint(9, 1), 0.5, 300, seeds, serial);
  const HypothesisTestSummary b = hypothesis_test_regret(
      algorithm_random_search(10), DyadicPoint(9, 1), 0.5, 300, seeds, parallel);
  CHECK(a.n_certified == b.n_certified);
  CHECK(a.mean_regret_certified == b.mean_regret_certified);
  CHECK(a.mean_mi_certified == b.mean_mi_certified);
}
