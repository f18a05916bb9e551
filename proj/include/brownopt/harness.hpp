#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brownopt/dyadic.hpp"
#include "brownopt/lowerbound.hpp"

namespace brownopt {

/// Raised for malformed or inconsistent configuration (maps to exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  std::vector<std::int64_t> T_grid{2500, 5000, 10000, 20000, 40000, 80000};
  double sigma2 = 0.5;
  int path_seeds = 20;
  int noise_seeds_per_path = 10;
  int truth_depth = 20;
  std::optional<double> delta_override;
  int parallelism = 0;  // 0: hardware concurrency
  std::string output_dir = "out";
  std::uint64_t seed_offset = 0;
  bool emit_timing = false;  // keeps reruns byte-identical when off

  void validate() const;
  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  /// "desk" (the default grid) or "paper-scale" (the full sweep).
  static ExperimentConfig preset(const std::string& name);
};

struct RunRecord {
  std::int64_t T = 0;
  std::uint64_t path_seed = 0;
  std::uint64_t noise_seed = 0;
  double R_T = 0.0;
  double r_T = 0.0;
  double RT_over_sqrtT = 0.0;
  std::int32_t epochs = 0;
  bool truncated = false;
  double disc_bound = 0.0;
  std::int64_t wall_ms = 0;
};

struct AggregateRecord {
  std::int64_t T = 0;
  std::int64_t n_runs = 0;
  double mean_R_T = 0.0;
  double std_R_T = 0.0;
  double mean_RT_over_sqrtT = 0.0;
  double std_RT_over_sqrtT = 0.0;
  double mean_r_T = 0.0;
  double std_r_T = 0.0;
  double mean_rT_sqrtT = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;
  std::vector<AggregateRecord> aggregates;
  double loglog_slope = 0.0;  // OLS slope of log mean R_T against log T
  std::string runs_csv;
  std::string aggregates_csv;
  std::string plot_svg;
};

/// Runs every (path seed, noise seed, T) replication, writes the run CSV,
/// the per-T aggregate CSV and the regret plot, and returns the records
/// sorted by (T, path_seed, noise_seed).
ExperimentResult run_experiment(const ExperimentConfig& config);

/// One (path seed, noise seed, T) run; the building block of `simulate`.
RunRecord simulate_run(std::uint64_t path_seed, std::uint64_t noise_seed, std::int64_t T,
                       double sigma2, std::optional<double> delta_override,
                       int truth_depth, DyadicPoint* recommendation_out = nullptr);

struct VerifyConfig {
  std::optional<std::vector<std::string>> checks;  // absent: the full suite
  std::uint64_t seed = 1;
  double scale = 1.0;  // multiplies Monte Carlo sample counts
  int parallelism = 0;
  std::string output_dir = "out";

  void validate() const;
  std::string to_json() const;
  static VerifyConfig from_json(const std::string& text);
};

struct CheckRow {
  std::string check;
  std::string detail;
  std::string kind;  // upper | lower | window | exact
  double bound = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double margin = 0.0;  // >= 0 means pass
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckRow> rows;
  bool all_pass = true;
  std::string report_csv;
  std::string report_json;
};

std::vector<std::string> verify_check_names();
VerifyReport run_lemma_suite(const VerifyConfig& config);

struct LowerBoundConfig {
  std::int64_t T = 1000;
  double sigma2 = 0.5;
  double delta = 0.5;
  double schedule_c = 1.0;                   // Delta = schedule_c / (T ln T), dyadic-rounded
  std::optional<int> delta_shift_log2;       // overrides the schedule: Delta = 2^-k
  int batches = 20;
  int seeds_per_batch = 500;
  std::vector<std::string> algorithms{"confidence_bound", "random_search"};
  int truth_depth = 0;  // 0: shift depth + 2
  int grid_depth = 0;   // 0: truth depth
  int random_search_depth = 10;
  std::uint64_t seed = 1;
  int parallelism = 0;
  std::string output_dir = "out";

  void validate() const;
  std::string to_json() const;
  static LowerBoundConfig from_json(const std::string& text);
};

struct LowerBoundRow {
  std::string algorithm;
  int batch = 0;
  HypothesisTestSummary summary;
};

struct LowerBoundReport {
  DyadicPoint delta_shift;
  std::vector<LowerBoundRow> rows;
  // fraction of batches whose certified mean regret respects the floor
  std::vector<std::pair<std::string, double>> fraction_ok;
  bool all_ok = true;  // every algorithm's fraction >= 0.95
  std::string report_csv;
  std::string report_json;
};

LowerBoundReport run_lowerbound_suite(const LowerBoundConfig& config);

/// Noise stream identity for a (path seed, replicate index) pair.
std::uint64_t derive_noise_seed(std::uint64_t path_seed, std::uint64_t noise_index);

}  // namespace brownopt
