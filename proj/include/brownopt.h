/* brownopt: noisy optimization of Brownian-motion sample paths.
 *
 * C interface to the brownopt shared library.  Handles are opaque; every
 * function returns a bo_status, with outputs written through pointers.
 * On failure, bo_last_error() returns a thread-local description of the
 * most recent error raised on the calling thread.
 *
 * Strings returned through char** are heap-allocated; release them with
 * bo_string_free.
 */
#ifndef BROWNOPT_H
#define BROWNOPT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bo_status {
  BO_OK = 0,
  BO_ERR_INVALID_ARGUMENT = 1,
  BO_ERR_DOMAIN = 2, /* point outside the path domain, or log-domain violation */
  BO_ERR_BUDGET = 3, /* oracle budget exhausted */
  BO_ERR_STATE = 4,  /* operation inconsistent with the object's state */
  BO_ERR_CONFIG = 5, /* malformed or invalid JSON configuration */
  BO_ERR_IO = 6,
  BO_ERR_CHECK_FAILED = 7, /* a verification suite reported failures */
  BO_ERR_INTERNAL = 8
} bo_status;

typedef struct bo_path bo_path;
typedef struct bo_oracle bo_oracle;

const char* bo_version(void);
const char* bo_last_error(void);

/* --- Brownian path ----------------------------------------------------- */

/* Lazy Brownian motion on [a_num/2^a_den_log2, b_num/2^b_den_log2] with
 * W(a) = anchor.  Lattice points are dyadic rationals depth/index with
 * position index/2^depth. */
bo_status bo_path_create(uint64_t seed, int64_t a_num, int32_t a_den_log2, int64_t b_num,
                         int32_t b_den_log2, double anchor, bo_path** out);
/* Standard BM on [0, 1] anchored at 0. */
bo_status bo_path_create_unit(uint64_t seed, bo_path** out);
void bo_path_destroy(bo_path* path);

bo_status bo_path_value(bo_path* path, int32_t depth, int64_t index, double* out);
/* Maximum over the depth-truth_depth lattice; any output pointer may be NULL. */
bo_status bo_path_grid_max(bo_path* path, int32_t truth_depth, double* max_value,
                           int32_t* argmax_depth, int64_t* argmax_index);

/* --- Closed forms ------------------------------------------------------ */

bo_status bo_eta(double x, double delta, double* out);
bo_status bo_alpha(double x, double delta, double* out);
bo_status bo_kappa(int32_t h, double delta, double* out);
bo_status bo_bridge_max_survival(double w_a, double w_b, double len, double y, double* out);
bo_status bo_n_samples(int32_t h, double sigma2, int64_t* out);

/* --- Noisy oracle ------------------------------------------------------ */

/* Budgeted noisy evaluation of a unit-domain path: y = W_x + N(0, sigma2),
 * noise stream keyed by (noise_seed, query index). */
bo_status bo_oracle_create(uint64_t path_seed, uint64_t noise_seed, double sigma2,
                           int64_t budget, bo_oracle** out);
void bo_oracle_destroy(bo_oracle* oracle);
bo_status bo_oracle_query(bo_oracle* oracle, int32_t depth, int64_t index, double* out);
bo_status bo_oracle_remaining(bo_oracle* oracle, int64_t* out);

/* --- Optimizer run ------------------------------------------------------ */

typedef struct bo_run_report {
  double cumulative_regret;     /* R_T against the discrete truth */
  double simple_regret;         /* r_T at the recommendation */
  double rt_over_sqrt_t;        /* R_T / sqrt(T) */
  double discretization_bound;  /* eta-based truth-error bound at 2^-truth_depth */
  double recommendation;        /* recommended position in [0, 1] */
  double truth_value;           /* discrete ground-truth maximum */
  int64_t queries;              /* trace length (= min(T, work)) */
  int32_t epochs_completed;
  int32_t truncated;            /* 1 if the budget ran out mid-epoch */
} bo_run_report;

/* One seeded run of the confidence-bound optimizer.  delta <= 0 selects
 * the preset T^(-1/2).  noise_seed is the replicate index; the actual
 * noise stream is derived from the (path_seed, noise_seed) pair. */
bo_status bo_simulate(uint64_t path_seed, uint64_t noise_seed, int64_t budget, double sigma2,
                      double delta, int32_t truth_depth, bo_run_report* out);

/* --- Orchestration ------------------------------------------------------ */

/* Configs are JSON objects documented in the README.  Each call writes its
 * report files under the config's output_dir and, when summary_json is not
 * NULL, returns a JSON summary. */
bo_status bo_run_experiment(const char* config_json, char** summary_json);
bo_status bo_run_verify(const char* config_json, char** summary_json);
bo_status bo_run_lowerbound(const char* config_json, char** summary_json);

/* Built-in experiment configs: "desk" or "paper-scale". */
bo_status bo_preset_config(const char* name, char** out_json);

void bo_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* BROWNOPT_H */
