#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <thread>

#include <json.hpp>

#include "brownopt/closed_form.hpp"
#include "brownopt/harness.hpp"
#include "brownopt/lemma_verify.hpp"
#include "brownopt/lowerbound.hpp"
#include "brownopt/oracle.hpp"
#include "brownopt/parallel.hpp"
#include "brownopt/regret.hpp"
#include "brownopt/rng.hpp"

namespace brownopt {

using nlohmann::json;

namespace {

struct CheckContext {
  std::uint64_t seed = 1;
  double scale = 1.0;
  int jobs = 1;

  std::int64_t scaled(std::int64_t n) const {
    const auto v = static_cast<std::int64_t>(std::llround(static_cast<double>(n) * scale));
    return std::max<std::int64_t>(v, 200);
  }
  std::uint64_t check_seed(const char* id) const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char* p = id; *p; ++p) {
      h ^= static_cast<unsigned char>(*p);
      h *= 0x100000001B3ULL;
    }
    return rng::key(seed, rng::kStreamScratch, 0xC4EC4, h);
  }
};

CheckRow upper_row(std::string check, std::string detail, double bound, double estimate,
                   double se) {
  CheckRow r;
  r.check = std::move(check);
  r.detail = std::move(detail);
  r.kind = "upper";
  r.bound = bound;
  r.estimate = estimate;
  r.std_error = se;
  r.margin = bound + 3.0 * se - estimate;
  r.pass = r.margin >= 0.0;
  return r;
}

CheckRow lower_row(std::string check, std::string detail, double bound, double estimate,
                   double se) {
  CheckRow r;
  r.check = std::move(check);
  r.detail = std::move(detail);
  r.kind = "lower";
  r.bound = bound;
  r.estimate = estimate;
  r.std_error = se;
  r.margin = estimate - (bound - 3.0 * se);
  r.pass = r.margin >= 0.0;
  return r;
}

// |estimate - center| <= tol, tolerance fixed by the check (no SE slack).
CheckRow window_row(std::string check, std::string detail, double center, double tol,
                    double estimate, double se) {
  CheckRow r;
  r.check = std::move(check);
  r.detail = std::move(detail);
  r.kind = "window";
  r.bound = tol;
  r.estimate = estimate;
  r.std_error = se;
  r.margin = tol - std::abs(estimate - center);
  r.pass = r.margin >= 0.0;
  return r;
}

double binomial_se(double p, std::int64_t n) {
  if (n <= 0) return 0.0;
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

double ks_statistic(std::vector<double>& sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    ks = std::max(ks, std::abs((static_cast<double>(i) + 1.0) / n - f));
    ks = std::max(ks, std::abs(static_cast<double>(i) / n - f));
  }
  return ks;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double folded_normal_cdf(double x) { return x <= 0.0 ? 0.0 : std::erf(x / std::numbers::sqrt2); }

// ---------------------------------------------------------------- checks

void check_w1_moments(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(100000);
  const std::uint64_t s0 = ctx.check_seed("bm.w1_moments");
  std::vector<double> vals(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    DyadicPath path = DyadicPath::unit(s0 + static_cast<std::uint64_t>(i));
    vals[static_cast<std::size_t>(i)] = path.value(DyadicPoint(0, 1));
  });
  double mean = 0, var = 0;
  for (const double v : vals) mean += v;
  mean /= static_cast<double>(n);
  for (const double v : vals) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  rows.push_back(window_row("bm.w1_moments", "mean of W_1 over " + std::to_string(n) + " seeds",
                            0.0, 0.02, mean, 1.0 / std::sqrt(static_cast<double>(n))));
  rows.push_back(window_row("bm.w1_moments", "variance of W_1", 1.0, 0.03, var,
                            std::numbers::sqrt2 / std::sqrt(static_cast<double>(n))));
}

void check_bridge_midpoint(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(100000);
  const std::uint64_t s0 = ctx.check_seed("bm.bridge_midpoint");
  std::vector<double> resid(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    DyadicPath path = DyadicPath::unit(s0 + static_cast<std::uint64_t>(i));
    const double w1 = path.value(DyadicPoint(0, 1));
    const double wm = path.value(DyadicPoint(1, 1));
    resid[static_cast<std::size_t>(i)] = wm - 0.5 * w1;
  });
  double var = 0;
  for (const double r : resid) var += r * r;
  var /= static_cast<double>(n);
  rows.push_back(window_row("bm.bridge_midpoint", "midpoint residual variance (law: 1/4)",
                            0.25, 0.005, var,
                            0.25 * std::numbers::sqrt2 / std::sqrt(static_cast<double>(n))));
}

void check_bridge_normality(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(10000);
  const std::uint64_t s0 = ctx.check_seed("bm.bridge_normality");
  std::vector<double> z(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    DyadicPath path = DyadicPath::unit(s0 + static_cast<std::uint64_t>(i));
    const double w1 = path.value(DyadicPoint(0, 1));
    const double wm = path.value(DyadicPoint(1, 1));
    z[static_cast<std::size_t>(i)] = (wm - 0.5 * w1) / 0.5;
  });
  const double ks = ks_statistic(z, normal_cdf);
  rows.push_back(upper_row("bm.bridge_normality",
                           "KS of standardized bridge residuals vs N(0,1)", 0.02, ks, 0.0));
}

void check_reflection_ks(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(100000);
  const std::int32_t depth = 14;
  const std::uint64_t s0 = ctx.check_seed("bm.reflection_ks");
  std::vector<double> maxes(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    DyadicPath path = DyadicPath::unit(s0 + static_cast<std::uint64_t>(i));
    maxes[static_cast<std::size_t>(i)] = path.grid_max(depth).value;
  });
  const double ks = ks_statistic(maxes, folded_normal_cdf);
  rows.push_back(upper_row("bm.reflection_ks",
                           "KS of depth-14 running max vs |N(0,1)| over " + std::to_string(n) +
                               " seeds",
                           0.01, ks, 0.0));
}

void check_running_max_eta(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(10000);
  const std::int32_t depth = 10;
  const double delta = 0.5;
  const std::uint64_t s0 = ctx.check_seed("bm.running_max_eta");
  const double eta = eta_bound(1.0, delta);
  std::vector<unsigned char> viol(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    DyadicPath path = DyadicPath::unit(s0 + static_cast<std::uint64_t>(i));
    const std::vector<double> grid = path.grid_values(depth);
    const double cap = std::max(grid.front(), grid.back()) + eta;
    bool v = false;
    for (const double w : grid) {
      if (w > cap) { v = true; break; }
    }
    viol[static_cast<std::size_t>(i)] = v ? 1 : 0;
  });
  double freq = 0;
  for (const unsigned char v : viol) freq += v;
  freq /= static_cast<double>(n);
  const double bound = std::pow(delta * 1.0, 5.0);
  rows.push_back(upper_row("bm.running_max_eta",
                           "P[sup W > max(W_0,W_1) + eta_0.5(1)] on the depth-10 grid", bound,
                           freq, binomial_se(freq, n)));
}

void check_bridge_survival(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  struct Triple { double wa, wb, len, y; };
  const Triple triples[] = {{0.0, 0.0, 1.0, 1.0}, {0.0, 0.5, 1.0, 1.0}, {-0.3, 0.2, 0.5, 0.8}};
  const std::int64_t n = ctx.scaled(20000);
  const std::int32_t depth = 12;
  const std::uint64_t s0 = ctx.check_seed("bm.bridge_survival");
  int t_ix = 0;
  for (const Triple& t : triples) {
    std::vector<unsigned char> exceed(static_cast<std::size_t>(n));
    const std::uint64_t base = s0 + static_cast<std::uint64_t>(t_ix) * 0x10000000ULL;
    parallel_for(n, ctx.jobs, [&](std::int64_t i) {
      const double mx =
          bridge_grid_max(base + static_cast<std::uint64_t>(i), t.wa, t.wb, t.len, depth);
      exceed[static_cast<std::size_t>(i)] = mx > t.y ? 1 : 0;
    });
    double freq = 0;
    for (const unsigned char e : exceed) freq += e;
    freq /= static_cast<double>(n);
    const double p = bridge_max_survival(t.wa, t.wb, t.len, t.y);
    rows.push_back(upper_row(
        "bm.bridge_survival",
        "bridge max exceedance (one-sided: grid below continuum), wa=" + std::to_string(t.wa) +
            " wb=" + std::to_string(t.wb) + " len=" + std::to_string(t.len) +
            " y=" + std::to_string(t.y),
        p, freq, binomial_se(freq, n)));
    ++t_ix;
  }
}

void check_meander_max(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  struct Triple { double s, t, x; };
  const Triple triples[] = {{0.25, 1.0, 0.2}, {0.125, 1.0, 0.15}, {0.5, 1.0, 0.2}};
  const std::int64_t n = ctx.scaled(30000);
  const std::uint64_t s0 = ctx.check_seed("meander.running_max");
  int t_ix = 0;
  for (const Triple& t : triples) {
    const FrequencyCheck fc = check_meander_running_max(
        t.s, t.t, t.x, 14, n, s0 + static_cast<std::uint64_t>(t_ix) * 0x10000000ULL, ctx.jobs);
    rows.push_back(lower_row("meander.running_max",
                             "s=" + std::to_string(t.s) + " t=" + std::to_string(t.t) +
                                 " x=" + std::to_string(t.x) + " (n_cond=" +
                                 std::to_string(fc.n) + ")",
                             fc.bound, fc.frequency, fc.std_error));
    ++t_ix;
  }
}

void check_meander_min(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  struct Triple { double u, eps, t; };
  const Triple triples[] = {{1.0, 0.2, 1.0}, {0.8, 0.1, 0.5}, {1.0, 0.3, 1.0}};
  const std::int64_t n = ctx.scaled(30000);
  const std::uint64_t s0 = ctx.check_seed("meander.running_min");
  int t_ix = 0;
  for (const Triple& t : triples) {
    const FrequencyCheck fc = check_meander_running_min(
        t.u, t.eps, t.t, 14, n, s0 + static_cast<std::uint64_t>(t_ix) * 0x10000000ULL, ctx.jobs);
    rows.push_back(lower_row("meander.running_min",
                             "u=" + std::to_string(t.u) + " eps=" + std::to_string(t.eps) +
                                 " t=" + std::to_string(t.t) + " (n_cond=" +
                                 std::to_string(fc.n) + ")",
                             fc.bound, fc.frequency, fc.std_error));
    ++t_ix;
  }
}

struct EventMOutcome {
  bool not_m = false;
  bool implication_violated = false;
};

EventMOutcome event_m_replication(std::uint64_t seed, std::int64_t T, double sigma2,
                                  double delta, std::int32_t h_check) {
  DyadicPath path = DyadicPath::unit(seed);
  NoisyOracle oracle(path, derive_noise_seed(seed, 0), sigma2, T);
  const RunTrace trace = run(oracle, ConfidenceParams{delta, sigma2});
  const EventMReport rep = check_event_M(path, trace, delta, h_check);
  EventMOutcome out;
  out.not_m = !rep.m();
  out.implication_violated = (rep.c_event && rep.m2 && !rep.m3) ||
                             (rep.c_prime && rep.m2 && !rep.m4);
  return out;
}

void check_event_m_frequency(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(10000);
  const double delta = 0.2, sigma2 = 0.5;
  const std::int64_t T = 2000;
  const std::int32_t h_check = 8;
  const std::uint64_t s0 = ctx.check_seed("event_m.frequency");
  std::vector<unsigned char> bad(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    bad[static_cast<std::size_t>(i)] =
        event_m_replication(s0 + static_cast<std::uint64_t>(i), T, sigma2, delta, h_check).not_m
            ? 1
            : 0;
  });
  double freq = 0;
  for (const unsigned char b : bad) freq += b;
  freq /= static_cast<double>(n);
  rows.push_back(upper_row("event_m.frequency",
                           "P[not M] at delta=0.2, H_check=8, T=2000, sigma2=0.5",
                           delta * delta, freq, binomial_se(freq, n)));
}

void check_event_m_implication(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(2000);
  const std::uint64_t s0 = ctx.check_seed("event_m.implication");
  std::vector<unsigned char> bad(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    bad[static_cast<std::size_t>(i)] =
        event_m_replication(s0 + static_cast<std::uint64_t>(i), 2000, 0.5, 0.2, 8)
                .implication_violated
            ? 1
            : 0;
  });
  double count = 0;
  for (const unsigned char b : bad) count += b;
  CheckRow r;
  r.check = "event_m.implication";
  r.detail = "(C and M2 => M3) and (C' and M2 => M4), per realization";
  r.kind = "exact";
  r.bound = 0.0;
  r.estimate = count;
  r.std_error = 0.0;
  r.margin = -count;
  r.pass = count == 0.0;
  rows.push_back(r);
}

void check_nearopt(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  struct Pair { std::int32_t h; double eta; };
  const Pair pairs[] = {{4, 0.2}, {6, 0.1}, {8, 0.05}};
  const std::int64_t n = ctx.scaled(100000);
  const std::uint64_t s0 = ctx.check_seed("nearopt.count");
  int p_ix = 0;
  for (const Pair& p : pairs) {
    std::vector<double> counts(static_cast<std::size_t>(n));
    const std::uint64_t base = s0 + static_cast<std::uint64_t>(p_ix) * 0x10000000ULL;
    parallel_for(n, ctx.jobs, [&](std::int64_t i) {
      DyadicPath path = DyadicPath::unit(base + static_cast<std::uint64_t>(i));
      counts[static_cast<std::size_t>(i)] =
          static_cast<double>(count_near_optimal(path, p.h, p.eta));
    });
    double mean = 0;
    for (const double c : counts) mean += c;
    mean /= static_cast<double>(n);
    double var = 0;
    for (const double c : counts) var += (c - mean) * (c - mean);
    var /= static_cast<double>(n - 1);
    const double bound = 6.0 * p.eta * p.eta * std::ldexp(1.0, p.h);
    rows.push_back(upper_row("nearopt.count",
                             "E[N_h(eta)] at h=" + std::to_string(p.h) +
                                 " eta=" + std::to_string(p.eta),
                             bound, mean, std::sqrt(var / static_cast<double>(n))));
    ++p_ix;
  }
}

void check_gap_reference(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(20000);
  const std::int32_t depth = 14;
  const std::uint64_t s0 = ctx.check_seed("gap.reference");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) seeds[static_cast<std::size_t>(i)] = s0 + static_cast<std::uint64_t>(i);

  std::vector<double> gaps(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    DyadicPath path = DyadicPath::unit(seeds[static_cast<std::size_t>(i)]);
    const std::vector<double> grid = path.grid_values(depth);
    const auto [mn, mx] = std::minmax_element(grid.begin(), grid.end());
    gaps[static_cast<std::size_t>(i)] = *mx - *mn;
  });
  double keyed_mean = 0;
  for (const double g : gaps) keyed_mean += g;
  keyed_mean /= static_cast<double>(n);

  // Independent straight-line sampler: sequential increments from a plain
  // counter-seeded engine.
  std::vector<double> ref(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    std::mt19937_64 gen(0xFEEDFACE + static_cast<std::uint64_t>(i));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::int64_t m = std::int64_t(1) << depth;
    const double sd = std::sqrt(std::ldexp(1.0, -depth));
    double w = 0, mx = 0, mn = 0;
    for (std::int64_t k = 0; k < m; ++k) {
      w += sd * gauss(gen);
      mx = std::max(mx, w);
      mn = std::min(mn, w);
    }
    ref[static_cast<std::size_t>(i)] = mx - mn;
  });
  double ref_mean = 0;
  for (const double g : ref) ref_mean += g;
  ref_mean /= static_cast<double>(n);

  rows.push_back(window_row("gap.reference",
                            "mean depth-14 Gap: keyed engine vs straight-line sampler",
                            ref_mean, 0.03 * ref_mean, keyed_mean, 0.0));
}

void check_gap_growth(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(20000);
  const std::uint64_t s0 = ctx.check_seed("gap.growth");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    seeds[static_cast<std::size_t>(i)] = s0 + static_cast<std::uint64_t>(i);
  }
  const double quantiles[] = {0.5, 0.9, 0.99};
  const GapBoundReport rep = check_gap_bound(seeds, 14, quantiles);
  CheckRow r;
  r.check = "gap.growth";
  r.detail = "growth coefficient of E[Gap|A] on sqrt(log(1/P[A])), q in {0.5,0.9,0.99}";
  r.kind = "window";
  r.bound = 1.0;
  r.estimate = rep.growth_coef;
  r.std_error = 0.0;
  r.margin = std::min(rep.growth_coef - 0.8, 1.2 - rep.growth_coef);
  r.pass = r.margin >= 0.0;
  rows.push_back(r);
}

void check_event_t_frequency(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(10000);
  const DyadicPoint shift(10, 1);  // Delta = 2^-10
  const double delta = 0.5, eta_exponent = 0.4;
  const std::int32_t depth = 12;
  const std::uint64_t s0 = ctx.check_seed("event_t.frequency");
  std::vector<unsigned char> cert(static_cast<std::size_t>(n));
  parallel_for(n, ctx.jobs, [&](std::int64_t i) {
    ShiftedPair pair = make_pair(s0 + static_cast<std::uint64_t>(i), shift, depth);
    cert[static_cast<std::size_t>(i)] = check_event_T(pair, delta, depth).all() ? 1 : 0;
  });
  double freq = 0;
  for (const unsigned char c : cert) freq += c;
  freq /= static_cast<double>(n);
  const double dv = shift.value();
  const double bound = 1.0 - 3.0 * std::pow(dv, eta_exponent) - delta - dv;
  rows.push_back(lower_row("event_t.frequency",
                           "P[T1 and T2 and T3] at Delta=2^-10, delta=0.5, eta_exponent=0.4",
                           bound, freq, binomial_se(freq, n)));
}

void check_noise_stats(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t n = ctx.scaled(100000);
  const double sigma2 = 0.5;
  const std::uint64_t s0 = ctx.check_seed("oracle.noise");
  DyadicPath path = DyadicPath::unit(s0);
  NoisyOracle oracle(path, s0 + 1, sigma2, n);
  const DyadicPoint mid(1, 1);
  const double w = path.value(mid);
  std::vector<double> resid(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    resid[static_cast<std::size_t>(i)] = oracle.query(mid) - w;
  }
  double mean = 0;
  for (const double r : resid) mean += r;
  mean /= static_cast<double>(n);
  double var = 0, autocov = 0;
  for (std::size_t i = 0; i < resid.size(); ++i) {
    var += (resid[i] - mean) * (resid[i] - mean);
    if (i + 1 < resid.size()) autocov += (resid[i] - mean) * (resid[i + 1] - mean);
  }
  var /= static_cast<double>(n - 1);
  const double rho = autocov / (static_cast<double>(n - 1) * var);
  rows.push_back(window_row("oracle.noise_variance", "residual variance at one point", sigma2,
                            0.03 * sigma2, var,
                            sigma2 * std::numbers::sqrt2 / std::sqrt(static_cast<double>(n))));
  rows.push_back(window_row("oracle.noise_autocorr", "lag-1 autocorrelation of residuals", 0.0,
                            0.02, rho, 1.0 / std::sqrt(static_cast<double>(n))));
}

void check_recommend_uniformity(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::int64_t draws = ctx.scaled(10000);
  RunTrace trace;
  const DyadicPoint a(1, 1), b(0, 1);
  for (int i = 0; i < 500; ++i) trace.state.trace.push_back(QueryRecord{a, 0.0, 0});
  for (int i = 0; i < 500; ++i) trace.state.trace.push_back(QueryRecord{b, 0.0, 0});
  const std::uint64_t s0 = ctx.check_seed("optimizer.recommend_uniformity");
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < draws; ++i) {
    if (recommend(trace, s0 + static_cast<std::uint64_t>(i)) == a) ++hits;
  }
  const double freq = static_cast<double>(hits) / static_cast<double>(draws);
  rows.push_back(window_row("optimizer.recommend_uniformity",
                            "pick frequency of a half-weight point over " +
                                std::to_string(draws) + " draws",
                            0.5, 0.02, freq, binomial_se(freq, draws)));
}

void check_h2_roundtrip(const CheckContext&, std::vector<CheckRow>& rows) {
  const double err = std::abs(binary_entropy_inverse(binary_entropy(0.11)) - 0.11);
  rows.push_back(upper_row("fano.h2_roundtrip", "|H2^-1(H2(0.11)) - 0.11|", 1e-10, err, 0.0));
}

void check_regret_mean_identity(const CheckContext& ctx, std::vector<CheckRow>& rows) {
  const std::uint64_t s0 = ctx.check_seed("regret.mean_identity");
  const std::int64_t T = 2000;
  DyadicPath path = DyadicPath::unit(s0);
  NoisyOracle oracle(path, derive_noise_seed(s0, 0), 0.5, T);
  const RunTrace trace = run(oracle, ConfidenceParams::preset(T, 0.5));
  const MaxRecord truth = path.grid_max(std::max(16, trace.max_query_depth + 4));
  const RegretReport rep = score(trace, recommend(trace, s0), path, truth);
  const std::int64_t draws = ctx.scaled(10000);
  double mean_r = 0;
  for (std::int64_t i = 0; i < draws; ++i) {
    const DyadicPoint rec = recommend(trace, s0 + 1 + static_cast<std::uint64_t>(i));
    mean_r += truth.value - path.value(rec);
  }
  mean_r /= static_cast<double>(draws);
  const double target = rep.cumulative / static_cast<double>(T);
  rows.push_back(window_row("regret.mean_identity",
                            "mean simple regret over recommendation draws vs R_T/T", target,
                            0.01 * target, mean_r, 0.0));
}

struct CheckDef {
  const char* id;
  void (*fn)(const CheckContext&, std::vector<CheckRow>&);
};

constexpr CheckDef kChecks[] = {
    {"bm.w1_moments", check_w1_moments},
    {"bm.bridge_midpoint", check_bridge_midpoint},
    {"bm.bridge_normality", check_bridge_normality},
    {"bm.reflection_ks", check_reflection_ks},
    {"bm.running_max_eta", check_running_max_eta},
    {"bm.bridge_survival", check_bridge_survival},
    {"meander.running_max", check_meander_max},
    {"meander.running_min", check_meander_min},
    {"event_m.frequency", check_event_m_frequency},
    {"event_m.implication", check_event_m_implication},
    {"nearopt.count", check_nearopt},
    {"gap.reference", check_gap_reference},
    {"gap.growth", check_gap_growth},
    {"event_t.frequency", check_event_t_frequency},
    {"oracle.noise", check_noise_stats},
    {"optimizer.recommend_uniformity", check_recommend_uniformity},
    {"fano.h2_roundtrip", check_h2_roundtrip},
    {"regret.mean_identity", check_regret_mean_identity},
};

std::string fmt_g17v(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a_text(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

std::vector<std::string> verify_check_names() {
  std::vector<std::string> names;
  for (const CheckDef& def : kChecks) names.emplace_back(def.id);
  return names;
}

VerifyReport run_lemma_suite(const VerifyConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  CheckContext ctx;
  ctx.seed = config.seed;
  ctx.scale = config.scale;
  {
    const unsigned hc = std::thread::hardware_concurrency();
    ctx.jobs = config.parallelism > 0 ? config.parallelism : (hc == 0 ? 1 : static_cast<int>(hc));
  }

  VerifyReport report;
  for (const CheckDef& def : kChecks) {
    if (config.checks) {
      const auto& sel = *config.checks;
      if (std::find(sel.begin(), sel.end(), def.id) == sel.end()) continue;
    }
    def.fn(ctx, report.rows);
  }
  if (config.checks) {
    for (const std::string& name : *config.checks) {
      bool known = false;
      for (const CheckDef& def : kChecks) {
        if (name == def.id) { known = true; break; }
      }
      if (!known) throw ConfigError("unknown check: " + name);
    }
  }
  for (const CheckRow& row : report.rows) {
    if (!row.pass) report.all_pass = false;
  }

  std::string csv = "# brownopt-verify v1 config=";
  {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a_text(config.to_json())));
    csv += buf;
    csv += '\n';
  }
  csv += "check,detail,kind,bound,estimate,std_error,margin,pass\n";
  for (const CheckRow& r : report.rows) {
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    csv += r.check + ',' + detail + ',' + r.kind + ',' + fmt_g17v(r.bound) + ',' +
           fmt_g17v(r.estimate) + ',' + fmt_g17v(r.std_error) + ',' + fmt_g17v(r.margin) + ',' +
           (r.pass ? "1" : "0") + '\n';
  }
  const std::filesystem::path dir(config.output_dir);
  report.report_csv = (dir / "verify_report.csv").string();
  {
    std::ofstream out(report.report_csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + report.report_csv);
    out << csv;
  }

  json j;
  j["all_pass"] = report.all_pass;
  json rows = json::array();
  for (const CheckRow& r : report.rows) {
    json row;
    row["check"] = r.check;
    row["detail"] = r.detail;
    row["kind"] = r.kind;
    row["bound"] = r.bound;
    row["estimate"] = r.estimate;
    row["std_error"] = r.std_error;
    row["margin"] = r.margin;
    row["pass"] = r.pass;
    rows.push_back(row);
  }
  j["rows"] = rows;
  report.report_json = (dir / "verify_report.json").string();
  {
    std::ofstream out(report.report_json, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + report.report_json);
    out << j.dump(2) << "\n";
  }
  return report;
}

}  // namespace brownopt
