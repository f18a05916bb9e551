#include "brownopt.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "brownopt/closed_form.hpp"
#include "brownopt/harness.hpp"
#include "brownopt/oracle.hpp"
#include "brownopt/optimizer.hpp"
#include "brownopt/path.hpp"

namespace {

thread_local std::string g_last_error;

bo_status fail(bo_status code, const char* what) {
  g_last_error = what ? what : "unknown error";
  return code;
}

/* Runs `fn` and maps thrown exceptions onto status codes. */
template <typename Fn>
bo_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const brownopt::BudgetError& e) {
    return fail(BO_ERR_BUDGET, e.what());
  } catch (const brownopt::ConfigError& e) {
    return fail(BO_ERR_CONFIG, e.what());
  } catch (const std::domain_error& e) {
    return fail(BO_ERR_DOMAIN, e.what());
  } catch (const std::length_error& e) {
    return fail(BO_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BO_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::logic_error& e) {
    return fail(BO_ERR_STATE, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(BO_ERR_IO, e.what());
  } catch (const std::bad_alloc& e) {
    return fail(BO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BO_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bo_status require(bool cond, const char* what) {
  return cond ? BO_OK : fail(BO_ERR_INVALID_ARGUMENT, what);
}

}  // namespace

struct bo_path {
  brownopt::DyadicPath impl;
};

struct bo_oracle {
  brownopt::DyadicPath path;
  brownopt::NoisyOracle impl;

  bo_oracle(uint64_t path_seed, uint64_t noise_seed, double sigma2, int64_t budget)
      : path(brownopt::DyadicPath::unit(path_seed)),
        impl(path, noise_seed, sigma2, budget) {}
};

extern "C" {

const char* bo_version(void) { return "brownopt 1.0.0"; }

const char* bo_last_error(void) { return g_last_error.c_str(); }

bo_status bo_path_create(uint64_t seed, int64_t a_num, int32_t a_den_log2, int64_t b_num,
                         int32_t b_den_log2, double anchor, bo_path** out) {
  if (bo_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    *out = new bo_path{brownopt::DyadicPath(seed, brownopt::DyadicPoint(a_den_log2, a_num),
                                            brownopt::DyadicPoint(b_den_log2, b_num), anchor)};
    return BO_OK;
  });
}

bo_status bo_path_create_unit(uint64_t seed, bo_path** out) {
  return bo_path_create(seed, 0, 0, 1, 0, 0.0, out);
}

void bo_path_destroy(bo_path* path) { delete path; }

bo_status bo_path_value(bo_path* path, int32_t depth, int64_t index, double* out) {
  if (bo_status s = require(path && out, "path and out must not be NULL")) return s;
  return guarded([&] {
    *out = path->impl.value(brownopt::DyadicPoint(depth, index));
    return BO_OK;
  });
}

bo_status bo_path_grid_max(bo_path* path, int32_t truth_depth, double* max_value,
                           int32_t* argmax_depth, int64_t* argmax_index) {
  if (bo_status s = require(path != nullptr, "path must not be NULL")) return s;
  return guarded([&] {
    const brownopt::MaxRecord rec = path->impl.grid_max(truth_depth);
    if (max_value) *max_value = rec.value;
    if (argmax_depth) *argmax_depth = rec.argmax.depth;
    if (argmax_index) *argmax_index = rec.argmax.index;
    return BO_OK;
  });
}

bo_status bo_eta(double x, double delta, double* out) {
  if (bo_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    *out = brownopt::eta_bound(x, delta);
    return BO_OK;
  });
}

bo_status bo_alpha(double x, double delta, double* out) {
  if (bo_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    *out = brownopt::alpha_bound(x, delta);
    return BO_OK;
  });
}

bo_status bo_kappa(int32_t h, double delta, double* out) {
  if (bo_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    *out = brownopt::kappa(h, delta);
    return BO_OK;
  });
}

bo_status bo_bridge_max_survival(double w_a, double w_b, double len, double y, double* out) {
  if (bo_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    *out = brownopt::bridge_max_survival(w_a, w_b, len, y);
    return BO_OK;
  });
}

bo_status bo_n_samples(int32_t h, double sigma2, int64_t* out) {
  if (bo_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    *out = brownopt::n_samples(h, sigma2);
    return BO_OK;
  });
}

bo_status bo_oracle_create(uint64_t path_seed, uint64_t noise_seed, double sigma2,
                           int64_t budget, bo_oracle** out) {
  if (bo_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    *out = new bo_oracle(path_seed, noise_seed, sigma2, budget);
    return BO_OK;
  });
}

void bo_oracle_destroy(bo_oracle* oracle) { delete oracle; }

bo_status bo_oracle_query(bo_oracle* oracle, int32_t depth, int64_t index, double* out) {
  if (bo_status s = require(oracle && out, "oracle and out must not be NULL")) return s;
  return guarded([&] {
    *out = oracle->impl.query(brownopt::DyadicPoint(depth, index));
    return BO_OK;
  });
}

bo_status bo_oracle_remaining(bo_oracle* oracle, int64_t* out) {
  if (bo_status s = require(oracle && out, "oracle and out must not be NULL")) return s;
  *out = oracle->impl.remaining();
  return BO_OK;
}

bo_status bo_simulate(uint64_t path_seed, uint64_t noise_seed, int64_t budget, double sigma2,
                      double delta, int32_t truth_depth, bo_run_report* out) {
  if (bo_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] {
    std::optional<double> delta_override;
    if (delta > 0.0) delta_override = delta;
    brownopt::DyadicPoint rec;
    const brownopt::RunRecord rr = brownopt::simulate_run(path_seed, noise_seed, budget,
                                                          sigma2, delta_override, truth_depth,
                                                          &rec);
    brownopt::DyadicPath path = brownopt::DyadicPath::unit(path_seed);
    out->cumulative_regret = rr.R_T;
    out->simple_regret = rr.r_T;
    out->rt_over_sqrt_t = rr.RT_over_sqrtT;
    out->discretization_bound = rr.disc_bound;
    out->recommendation = rec.value();
    out->truth_value = rr.r_T + path.value(rec);
    out->queries = rr.T;
    out->epochs_completed = rr.epochs;
    out->truncated = rr.truncated ? 1 : 0;
    return BO_OK;
  });
}

bo_status bo_run_experiment(const char* config_json, char** summary_json) {
  if (bo_status s = require(config_json != nullptr, "config_json must not be NULL")) return s;
  return guarded([&] {
    const brownopt::ExperimentConfig config =
        brownopt::ExperimentConfig::from_json(config_json);
    const brownopt::ExperimentResult result = brownopt::run_experiment(config);
    if (summary_json) {
      nlohmann::json j;
      j["runs_csv"] = result.runs_csv;
      j["aggregates_csv"] = result.aggregates_csv;
      j["plot_svg"] = result.plot_svg;
      j["loglog_slope"] = result.loglog_slope;
      nlohmann::json aggs = nlohmann::json::array();
      for (const brownopt::AggregateRecord& a : result.aggregates) {
        nlohmann::json row;
        row["T"] = a.T;
        row["n_runs"] = a.n_runs;
        row["mean_R_T"] = a.mean_R_T;
        row["std_R_T"] = a.std_R_T;
        row["mean_RT_over_sqrtT"] = a.mean_RT_over_sqrtT;
        row["std_RT_over_sqrtT"] = a.std_RT_over_sqrtT;
        row["mean_r_T"] = a.mean_r_T;
        row["std_r_T"] = a.std_r_T;
        row["mean_rT_sqrtT"] = a.mean_rT_sqrtT;
        aggs.push_back(row);
      }
      j["aggregates"] = aggs;
      *summary_json = dup_string(j.dump(2));
    }
    return BO_OK;
  });
}

bo_status bo_run_verify(const char* config_json, char** summary_json) {
  if (bo_status s = require(config_json != nullptr, "config_json must not be NULL")) return s;
  return guarded([&] {
    const brownopt::VerifyConfig config = brownopt::VerifyConfig::from_json(config_json);
    const brownopt::VerifyReport report = brownopt::run_lemma_suite(config);
    if (summary_json) {
      nlohmann::json j;
      j["all_pass"] = report.all_pass;
      j["report_csv"] = report.report_csv;
      j["report_json"] = report.report_json;
      j["rows"] = report.rows.size();
      nlohmann::json failed = nlohmann::json::array();
      for (const brownopt::CheckRow& r : report.rows) {
        if (!r.pass) failed.push_back(r.check + " (" + r.detail + ")");
      }
      j["failed"] = failed;
      *summary_json = dup_string(j.dump(2));
    }
    if (!report.all_pass) return fail(BO_ERR_CHECK_FAILED, "verification suite has failures");
    return BO_OK;
  });
}

bo_status bo_run_lowerbound(const char* config_json, char** summary_json) {
  if (bo_status s = require(config_json != nullptr, "config_json must not be NULL")) return s;
  return guarded([&] {
    const brownopt::LowerBoundConfig config = brownopt::LowerBoundConfig::from_json(config_json);
    const brownopt::LowerBoundReport report = brownopt::run_lowerbound_suite(config);
    if (summary_json) {
      nlohmann::json j;
      j["all_ok"] = report.all_ok;
      j["delta_shift"] = report.delta_shift.str();
      j["report_csv"] = report.report_csv;
      j["report_json"] = report.report_json;
      nlohmann::json fr = nlohmann::json::object();
      for (const auto& [name, frac] : report.fraction_ok) fr[name] = frac;
      j["fraction_ok"] = fr;
      *summary_json = dup_string(j.dump(2));
    }
    if (!report.all_ok) return fail(BO_ERR_CHECK_FAILED, "Fano floor violated too often");
    return BO_OK;
  });
}

bo_status bo_preset_config(const char* name, char** out_json) {
  if (bo_status s = require(name && out_json, "name and out_json must not be NULL")) return s;
  return guarded([&] {
    *out_json = dup_string(brownopt::ExperimentConfig::preset(name).to_json());
    return BO_OK;
  });
}

void bo_string_free(char* text) { delete[] text; }

}  // extern "C"
