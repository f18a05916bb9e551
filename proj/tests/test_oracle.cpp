#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "brownopt/oracle.hpp"
#include "brownopt/path.hpp"

using namespace brownopt;

TEST_CASE("zero-noise queries return the exact path value") {
  DyadicPath path = DyadicPath::unit(11);
  NoisyOracle oracle(path, 99, 0.0, 10);
  const DyadicPoint p(3, 5);
  CHECK(oracle.query(p) == path.value(p));
  CHECK(oracle.query(DyadicPoint(0, 1)) == path.value(DyadicPoint(0, 1)));
}

TEST_CASE("budget accounting and the exhaustion error") {
  DyadicPath path = DyadicPath::unit(12);
  NoisyOracle oracle(path, 1, 0.5, 3);
  CHECK(oracle.remaining() == 3);
  oracle.query(DyadicPoint(0, 1));
  CHECK(oracle.remaining() == 2);
  CHECK(oracle.spent() == 1);
  oracle.query(DyadicPoint(0, 1));
  oracle.query(DyadicPoint(1, 1));
  CHECK(oracle.remaining() == 0);
  CHECK_THROWS_AS(oracle.query(DyadicPoint(1, 1)), BudgetError);
  CHECK(oracle.spent() == 3);  // failed query does not consume budget
  CHECK(oracle.remaining() == 0);
  CHECK(oracle.log().size() == 3);
}

TEST_CASE("runs are bit-reproducible for a (path seed, noise seed) pair") {
  const DyadicPoint p(2, 3);
  std::vector<double> first;
  for (int rep = 0; rep < 2; ++rep) {
    DyadicPath path = DyadicPath::unit(77);
    NoisyOracle oracle(path, 1234, 0.25, 50);
    std::vector<double> ys;
    for (int i = 0; i < 50; ++i) ys.push_back(oracle.query(p));
    if (rep == 0) first = ys;
    else CHECK(first == ys);
  }
  // a different noise seed changes the observations but not the path
  DyadicPath path = DyadicPath::unit(77);
  NoisyOracle other(path, 4321, 0.25, 1);
  CHECK(other.query(p) != first[0]);
}

TEST_CASE("residuals at a fixed point have the configured variance and no lag-1 correlation") {
  const int n = 100000;
  const double sigma2 = 0.5;
  DyadicPath path = DyadicPath::unit(5);
  NoisyOracle oracle(path, 7, sigma2, n);
  const DyadicPoint p(1, 1);
  const double w = path.value(p);
  std::vector<double> resid(n);
  for (int i = 0; i < n; ++i) resid[static_cast<std::size_t>(i)] = oracle.query(p) - w;

  double mean = 0;
  for (const double r : resid) mean += r;
  mean /= n;
  double var = 0, autocov = 0;
  for (std::size_t i = 0; i < resid.size(); ++i) {
    var += (resid[i] - mean) * (resid[i] - mean);
    if (i + 1 < resid.size()) autocov += (resid[i] - mean) * (resid[i + 1] - mean);
  }
  var /= (n - 1);
  const double rho = autocov / ((n - 1) * var);
  CHECK(std::abs(var - sigma2) < 0.03 * sigma2);
  CHECK(std::abs(rho) < 0.02);
}

TEST_CASE("constructor validation") {
  DyadicPath path = DyadicPath::unit(1);
  CHECK_THROWS_AS(NoisyOracle(path, 1, -0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(NoisyOracle(path, 1, 0.5, -1), std::invalid_argument);
  NoisyOracle empty(path, 1, 0.5, 0);
  CHECK(empty.remaining() == 0);
  CHECK_THROWS_AS(empty.query(DyadicPoint(0, 0)), BudgetError);
}
