// Command-line front end for the brownopt shared library.  Talks to the
// library exclusively through the C API in brownopt.h.
//
// Exit codes: 0 ok, 1 check failure, 2 usage/config error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "brownopt.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

int status_to_exit(bo_status s) {
  switch (s) {
    case BO_OK:
      return kExitOk;
    case BO_ERR_CONFIG:
    case BO_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitCheckFailure;
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  json j = json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("config file is not a JSON object: " + path);
  }
  return j;
}

struct CommonFlags {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> T;
  std::optional<double> sigma2;
  std::optional<double> delta;
  std::optional<int> truth_depth;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_file, "JSON config file (flags override file values)");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--T", f.T, "query budget");
  cmd->add_option("--sigma2", f.sigma2, "observation noise variance");
  cmd->add_option("--delta", f.delta, "confidence failure probability");
  cmd->add_option("--truth-depth", f.truth_depth, "ground-truth grid depth");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--jobs", f.jobs, "worker threads (0: all cores)");
}

json base_config(const CommonFlags& f) {
  return f.config_file.empty() ? json::object() : load_config_file(f.config_file);
}

int report_error(bo_status s) {
  std::cerr << "error: " << bo_last_error() << "\n";
  return status_to_exit(s);
}

std::string take_string(char* text) {
  std::string out = text ? text : "";
  bo_string_free(text);
  return out;
}

int cmd_simulate(const CommonFlags& f) {
  const json cfg = base_config(f);
  const std::uint64_t path_seed = f.seed.value_or(cfg.value("seed", 1ULL));
  const std::uint64_t noise_seed = cfg.value("noise_seed", 0ULL);
  const std::int64_t T = f.T.value_or(cfg.value("T", 1000LL));
  const double sigma2 = f.sigma2.value_or(cfg.value("sigma2", 0.5));
  const double delta = f.delta.value_or(cfg.value("delta", 0.0));  // <= 0: preset
  const int truth_depth = f.truth_depth.value_or(cfg.value("truth_depth", 20));

  bo_run_report rep;
  const bo_status s = bo_simulate(path_seed, noise_seed, T, sigma2, delta, truth_depth, &rep);
  if (s != BO_OK) return report_error(s);

  std::printf("run: path_seed=%llu noise_seed=%llu T=%lld sigma2=%g\n",
              static_cast<unsigned long long>(path_seed),
              static_cast<unsigned long long>(noise_seed), static_cast<long long>(T), sigma2);
  std::printf("cumulative_regret   %.6f\n", rep.cumulative_regret);
  std::printf("simple_regret       %.6f\n", rep.simple_regret);
  std::printf("RT_over_sqrtT       %.6f\n", rep.rt_over_sqrt_t);
  std::printf("truth_value         %.6f\n", rep.truth_value);
  std::printf("recommendation      %.10f\n", rep.recommendation);
  std::printf("epochs_completed    %d\n", rep.epochs_completed);
  std::printf("truncated           %s\n", rep.truncated ? "yes" : "no");
  std::printf("discretization_bound %.6g\n", rep.discretization_bound);
  return kExitOk;
}

int cmd_experiment(const CommonFlags& f, const std::string& preset) {
  json cfg;
  if (!preset.empty()) {
    char* text = nullptr;
    const bo_status s = bo_preset_config(preset.c_str(), &text);
    if (s != BO_OK) return report_error(s);
    cfg = json::parse(take_string(text));
    if (!f.config_file.empty()) {
      for (const auto& [k, v] : load_config_file(f.config_file).items()) cfg[k] = v;
    }
  } else {
    cfg = base_config(f);
  }
  if (f.T) cfg["T_grid"] = json::array({*f.T});
  if (f.sigma2) cfg["sigma2"] = *f.sigma2;
  if (f.delta) cfg["delta_override"] = *f.delta;
  if (f.truth_depth) cfg["truth_depth"] = *f.truth_depth;
  if (f.seed) cfg["seed_offset"] = *f.seed;
  if (f.out_dir) cfg["output_dir"] = *f.out_dir;
  if (f.jobs) cfg["parallelism"] = *f.jobs;

  char* summary = nullptr;
  const bo_status s = bo_run_experiment(cfg.dump().c_str(), &summary);
  if (s != BO_OK) return report_error(s);
  std::cout << take_string(summary) << "\n";
  return kExitOk;
}

int cmd_verify(const CommonFlags& f, const std::vector<std::string>& checks, double scale) {
  json cfg = base_config(f);
  if (!checks.empty()) cfg["checks"] = checks;
  if (scale > 0.0) cfg["scale"] = scale;
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.out_dir) cfg["output_dir"] = *f.out_dir;
  if (f.jobs) cfg["parallelism"] = *f.jobs;

  char* summary = nullptr;
  const bo_status s = bo_run_verify(cfg.dump().c_str(), &summary);
  if (s != BO_OK && s != BO_ERR_CHECK_FAILED) return report_error(s);
  std::cout << take_string(summary) << "\n";
  if (s == BO_ERR_CHECK_FAILED) {
    std::cerr << "verify: FAILED\n";
    return kExitCheckFailure;
  }
  std::cout << "verify: all checks passed\n";
  return kExitOk;
}

int cmd_lowerbound(const CommonFlags& f) {
  json cfg = base_config(f);
  if (f.T) cfg["T"] = *f.T;
  if (f.sigma2) cfg["sigma2"] = *f.sigma2;
  if (f.delta) cfg["delta"] = *f.delta;
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.out_dir) cfg["output_dir"] = *f.out_dir;
  if (f.jobs) cfg["parallelism"] = *f.jobs;
  if (f.truth_depth) cfg["truth_depth"] = *f.truth_depth;

  char* summary = nullptr;
  const bo_status s = bo_run_lowerbound(cfg.dump().c_str(), &summary);
  if (s != BO_OK && s != BO_ERR_CHECK_FAILED) return report_error(s);
  std::cout << take_string(summary) << "\n";
  if (s == BO_ERR_CHECK_FAILED) {
    std::cerr << "lowerbound: FAILED\n";
    return kExitCheckFailure;
  }
  std::cout << "lowerbound: Fano floor respected\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("brownopt - noisy Brownian-motion optimization (") + bo_version() +
               ")"};
  app.require_subcommand(1);

  CommonFlags sim_f, exp_f, ver_f, low_f;
  std::string preset;
  std::vector<std::string> checks;
  double scale = 0.0;

  CLI::App* sim = app.add_subcommand("simulate", "one optimizer run; prints the regret report");
  add_common_flags(sim, sim_f);
  CLI::App* exp = app.add_subcommand("experiment", "regret-scaling sweep; writes CSV + SVG");
  add_common_flags(exp, exp_f);
  exp->add_option("--preset", preset, "built-in config: desk or paper-scale");
  CLI::App* ver = app.add_subcommand("verify", "statistical verification suite");
  add_common_flags(ver, ver_f);
  ver->add_option("--check", checks, "run only the named checks (repeatable)");
  ver->add_option("--scale", scale, "Monte Carlo sample-size multiplier");
  CLI::App* low = app.add_subcommand("lowerbound", "hypothesis-testing floor experiment");
  add_common_flags(low, low_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_f);
    if (exp->parsed()) return cmd_experiment(exp_f, preset);
    if (ver->parsed()) return cmd_verify(ver_f, checks, scale);
    if (low->parsed()) return cmd_lowerbound(low_f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
