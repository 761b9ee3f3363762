/* C interface to the phase-retrieval ERM laboratory.
 *
 * Every function returns a pl_status; on failure pl_last_error() holds a
 * message for the calling thread. Handles are opaque and owned by the caller,
 * who releases them with the matching *_free function. Strings returned as
 * const char* stay valid until the owning handle is freed or modified. */
#ifndef PHASELAB_H
#define PHASELAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(PHASELAB_BUILDING_LIBRARY)
#define PL_API __attribute__((visibility("default")))
#else
#define PL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pl_status {
  PL_OK = 0,
  PL_INVALID_ARGUMENT = 1,
  PL_UNSUPPORTED_SET = 2,
  PL_BUDGET_EXCEEDED = 3,
  PL_PARSE_ERROR = 4,
  PL_INSUFFICIENT_DATA = 5,
  PL_IO_ERROR = 6,
  PL_INTERNAL_ERROR = 99
} pl_status;

typedef struct pl_set pl_set;
typedef struct pl_config pl_config;
typedef struct pl_results pl_results;
typedef struct pl_report pl_report;

typedef struct pl_row {
  int N;
  double sigma;
  double R0;
  int trial;
  double product_error;
  double sign_error;
  double objective;
  int converged;
} pl_row;

typedef struct pl_summary {
  int N;
  double sigma;
  double R0;
  int trials;
  int non_converged;
  double median_product_error;
  double median_sign_error;
  double success_fraction;
} pl_summary;

typedef struct pl_fixed_point_result {
  double value;
  double bracket_width;
  int power;
  int warnings;
} pl_fixed_point_result;

typedef struct pl_prediction {
  double rate;
  double product_rate;
  const char* regime; /* static string */
} pl_prediction;

PL_API const char* pl_last_error(void);
PL_API const char* pl_status_name(pl_status status);
PL_API int pl_default_threads(void);

/* Constraint sets: "sparse_cap:n=64,d=4", "l1_ball:n=100,radius=1", ... */
PL_API pl_status pl_set_parse(const char* spec, pl_set** out);
PL_API void pl_set_free(pl_set* set);
PL_API int pl_set_dimension(const pl_set* set);
PL_API const char* pl_set_describe(const pl_set* set);
PL_API pl_status pl_set_project(const pl_set* set, const double* x, int n, double* out);
PL_API pl_status pl_set_contains(const pl_set* set, const double* x, int n, double tol,
                                 int* out);
PL_API pl_status pl_support_function(const pl_set* set, double r, const double* g, int n,
                                     double* out);
PL_API pl_status pl_mean_width_mc(const pl_set* set, double r, int draws, uint64_t seed,
                                  double* value, double* std_error);
PL_API pl_status pl_mean_width_closed_form(const pl_set* set, double r, double* out);

/* functional: r0 r2 rN sN vN qN tN; backend: closed_form or monte_carlo.
 * `draws` and `seed` configure the Monte Carlo and packing estimators. */
PL_API pl_status pl_fixed_point(const pl_set* set, const char* functional, double level,
                                int N, double shell_R0, const char* backend, int draws,
                                uint64_t seed, pl_fixed_point_result* out);

/* shell_R0 < 0 disables the shell constraint; grid != 0 uses a regular grid
 * (n <= 2). */
PL_API pl_status pl_packing_count(const pl_set* set, const double* center, int n,
                                  double ball_radius, double separation, double shell_R0,
                                  int candidates, int grid, uint64_t seed, int* count);
PL_API pl_status pl_minimax_lower_rate(const pl_set* set, int N, double sigma, double R0,
                                       int candidates, uint64_t seed, double* rate,
                                       double* qN, double* tN, int* large_norm);

PL_API pl_status pl_predict_sparse(int n, int d, int N, double sigma, double R0,
                                   pl_prediction* out);
PL_API pl_status pl_predict_l1(int n, int N, double sigma, double R0, pl_prediction* out);

/* Experiment configurations (JSON). */
PL_API pl_status pl_config_load(const char* path, pl_config** out);
PL_API pl_status pl_config_from_json(const char* text, pl_config** out);
PL_API void pl_config_free(pl_config* config);
PL_API const char* pl_config_to_json(pl_config* config);
PL_API pl_status pl_config_set_seed(pl_config* config, uint64_t seed);

/* threads <= 0 selects pl_default_threads(); results do not depend on it. */
PL_API pl_status pl_simulate(const pl_config* config, int threads, pl_results** out);
PL_API pl_status pl_results_load_csv(const char* path, double success_tolerance,
                                     pl_results** out);
PL_API void pl_results_free(pl_results* results);
PL_API size_t pl_results_row_count(const pl_results* results);
PL_API pl_status pl_results_row(const pl_results* results, size_t index, pl_row* out);
PL_API size_t pl_results_summary_count(const pl_results* results);
PL_API pl_status pl_results_summary(const pl_results* results, size_t index, pl_summary* out);
PL_API pl_status pl_results_export_csv(const pl_results* results, const char* path);
PL_API const char* pl_results_csv(pl_results* results);
PL_API const char* pl_results_summary_json(pl_results* results);
/* axis: "N" or "sigma"; metric: "product_error" or "sign_error". */
PL_API pl_status pl_fit_slope(const pl_results* results, const char* axis, const char* metric,
                              double* slope, double* r_squared);

/* Lemma regression suites: norm-equivalence, rearrangement, paley-zygmund, all. */
PL_API pl_status pl_check_run(const char* suite, long long norm_triples, int vectors,
                              uint64_t seed, pl_report** out);
PL_API void pl_report_free(pl_report* report);
PL_API int pl_report_passed(const pl_report* report);
PL_API const char* pl_report_json(const pl_report* report);

#ifdef __cplusplus
}
#endif

#endif
