// Acceptance suite: runs every gate criterion at full size and prints one
// PASS/FAIL line per criterion.  Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "brownopt/harness.hpp"
#include "brownopt/lemma_verify.hpp"
#include "brownopt/lowerbound.hpp"
#include "brownopt/optimizer.hpp"
#include "brownopt/oracle.hpp"
#include "brownopt/parallel.hpp"
#include "brownopt/path.hpp"
#include "brownopt/regret.hpp"
#include "reference_algorithm.hpp"

using namespace brownopt;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& text) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, text.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const AggregateRecord& agg_at(const ExperimentResult& res, std::int64_t T) {
  for (const AggregateRecord& a : res.aggregates) {
    if (a.T == T) return a;
  }
  throw std::runtime_error("aggregate missing for T");
}

// Criteria 1 & 2: the desk-scale regret experiment.
void criteria_regret_scaling(const std::string& out_root) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig config;  // desk preset: {2.5k..80k}, sigma2=0.5, 20x10
  config.output_dir = out_root + "/experiment";
  const ExperimentResult res = run_experiment(config);

  const double slope = res.loglog_slope;
  const double ratio_R = agg_at(res, 80000).mean_RT_over_sqrtT /
                         agg_at(res, 2500).mean_RT_over_sqrtT;
  const bool pass1 = slope >= 0.40 && slope <= 0.65 && ratio_R <= 1.6;
  {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "regret scaling: log-log slope of mean R_T vs T = %.4f (window [0.40, 0.65]); "
                  "mean R_T/sqrt(T) ratio 80k/2.5k = %.3f (<= 1.6); %.0fs",
                  slope, ratio_R, elapsed_s(t0));
    report(1, pass1, buf);
  }

  const double ratio_r = agg_at(res, 80000).mean_rT_sqrtT / agg_at(res, 2500).mean_rT_sqrtT;
  {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "simple regret: mean r_T*sqrt(T) ratio 80k/2.5k = %.3f (<= 3)", ratio_r);
    report(2, ratio_r <= 3.0, buf);
  }
}

// One row-set of the verification suite, reported under one criterion.
void criterion_from_checks(int criterion, const std::string& out_root, const char* label,
                           const std::vector<std::string>& checks) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyConfig config;
  config.checks = checks;
  config.output_dir = out_root + "/verify_" + std::to_string(criterion);
  const VerifyReport rep = run_lemma_suite(config);
  bool pass = rep.all_pass && !rep.rows.empty();
  std::string detail;
  for (const CheckRow& row : rep.rows) {
    if (!detail.empty()) detail += "; ";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s est=%.4g bound=%.4g", row.check.c_str(), row.estimate,
                  row.bound);
    detail += buf;
    if (!row.pass) detail += " [FAILED]";
  }
  char buf[640];
  std::snprintf(buf, sizeof(buf), "%s: %s; %.0fs", label, detail.c_str(), elapsed_s(t0));
  report(criterion, pass, buf);
}

void criterion_fano(const std::string& out_root) {
  const auto t0 = std::chrono::steady_clock::now();
  LowerBoundConfig config;  // T=1000, 20 batches x 500 seeds, both algorithms
  config.output_dir = out_root + "/lowerbound";
  const LowerBoundReport rep = run_lowerbound_suite(config);
  std::string detail = "Delta=" + rep.delta_shift.str();
  for (const auto& [name, frac] : rep.fraction_ok) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "; %s: %.0f%% of batches respect the floor", name.c_str(),
                  100.0 * frac);
    detail += buf;
  }
  char buf[384];
  std::snprintf(buf, sizeof(buf), "Fano consistency at T=1000: %s (need >= 95%%); %.0fs",
                detail.c_str(), elapsed_s(t0));
  report(8, rep.all_ok, buf);
}

void criterion_conformance() {
  const auto t0 = std::chrono::steady_clock::now();
  const int runs = 100;
  const std::int64_t T = 10000;
  const double sigma2 = 0.5;

  std::vector<unsigned char> trace_ok(runs, 0);
  std::vector<unsigned char> regret_ok(runs, 1);
  std::vector<unsigned char> certified(runs, 0);

  parallel_for(runs, 0, [&](std::int64_t i) {
    const auto seed = 310000 + static_cast<std::uint64_t>(i);
    const double delta = 1.0 / std::sqrt(static_cast<double>(T));

    DyadicPath path = DyadicPath::unit(seed);
    NoisyOracle oracle(path, derive_noise_seed(seed, 0), sigma2, T);
    const RunTrace trace = run(oracle, ConfidenceParams{delta, sigma2});

    DyadicPath ref_path = DyadicPath::unit(seed);
    NoisyOracle ref_oracle(ref_path, derive_noise_seed(seed, 0), sigma2, T);
    const refalgo::Result ref = refalgo::run_reference(ref_oracle, delta, sigma2);

    bool same = trace.queries().size() == ref.queries.size();
    if (same) {
      for (std::size_t q = 0; q < ref.queries.size(); ++q) {
        if (!(trace.queries()[q].point == ref.queries[q])) { same = false; break; }
      }
    }
    trace_ok[static_cast<std::size_t>(i)] = same ? 1 : 0;

    const std::int32_t h_check = std::min(trace.max_query_depth, 16);
    const EventMReport m = check_event_M(path, trace, delta, h_check);
    if (!m.m()) return;  // regret bound is only claimed under event M
    certified[static_cast<std::size_t>(i)] = 1;

    const MaxRecord truth = path.grid_max(std::max(20, trace.max_query_depth + 4));
    for (const QueryRecord& q : trace.queries()) {
      if (q.round < 0) continue;  // initialization samples carry no bound
      const double regret = truth.value - path.value(q.point);
      if (regret > 4.0 * kappa(q.round, delta)) {
        regret_ok[static_cast<std::size_t>(i)] = 0;
        break;
      }
    }
  });

  int traces = 0, certified_n = 0, regret_bad = 0;
  for (int i = 0; i < runs; ++i) {
    traces += trace_ok[static_cast<std::size_t>(i)];
    if (certified[static_cast<std::size_t>(i)]) {
      ++certified_n;
      if (!regret_ok[static_cast<std::size_t>(i)]) ++regret_bad;
    }
  }
  const bool pass = traces == runs && regret_bad == 0 && certified_n > 0;
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "conformance: %d/%d traces bit-identical to the straight-line reference at "
                "T=10^4; per-epoch regret <= 4 kappa_h on all %d event-M-certified runs "
                "(%d violations); %.0fs",
                traces, runs, certified_n, regret_bad, elapsed_s(t0));
  report(9, pass, buf);
}

void criterion_determinism(const std::string& out_root) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig config;
  config.T_grid = {500, 1000};
  config.path_seeds = 3;
  config.noise_seeds_per_path = 2;
  config.truth_depth = 14;
  config.output_dir = out_root + "/determinism";

  run_experiment(config);
  const std::string runs1 = slurp(config.output_dir + "/runs.csv");
  const std::string aggs1 = slurp(config.output_dir + "/aggregates.csv");
  const std::string svg1 = slurp(config.output_dir + "/regret_plot.svg");
  run_experiment(config);
  const bool exp_ok = runs1 == slurp(config.output_dir + "/runs.csv") &&
                      aggs1 == slurp(config.output_dir + "/aggregates.csv") &&
                      svg1 == slurp(config.output_dir + "/regret_plot.svg") && !runs1.empty();

  VerifyConfig vconfig;
  vconfig.checks = std::vector<std::string>{"fano.h2_roundtrip", "nearopt.count"};
  vconfig.scale = 0.05;
  vconfig.output_dir = out_root + "/determinism_verify";
  run_lemma_suite(vconfig);
  const std::string verify1 = slurp(vconfig.output_dir + "/verify_report.csv");
  run_lemma_suite(vconfig);
  const bool verify_ok = verify1 == slurp(vconfig.output_dir + "/verify_report.csv");

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "determinism: rerun CSV outputs byte-identical (experiment: %s, verify: %s); "
                "%.0fs",
                exp_ok ? "yes" : "NO", verify_ok ? "yes" : "NO", elapsed_s(t0));
  report(10, exp_ok && verify_ok, buf);
}

}  // namespace

int main() {
  const std::string out_root = "acceptance_out";
  fs::create_directories(out_root);
  const auto t0 = std::chrono::steady_clock::now();

  criteria_regret_scaling(out_root);
  criterion_from_checks(3, out_root, "event M frequency (Lemma: P[not M] <= delta^2)",
                        {"event_m.frequency"});
  criterion_from_checks(4, out_root, "near-optimal counting", {"nearopt.count"});
  criterion_from_checks(5, out_root, "distributional oracles",
                        {"bm.reflection_ks", "bm.bridge_survival"});
  criterion_from_checks(6, out_root, "meander bounds",
                        {"meander.running_max", "meander.running_min"});
  criterion_from_checks(7, out_root, "event T certification frequency",
                        {"event_t.frequency"});
  criterion_fano(out_root);
  criterion_conformance();
  criterion_determinism(out_root);

  std::printf("acceptance: %d/10 criteria passed in %.0fs\n", 10 - g_failures,
              elapsed_s(t0));
  return g_failures;
}
