/* SPDX-License-Identifier: Apache-2.0 */

#ifndef DIFFEST_H
#define DIFFEST_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(DIFFEST_BUILDING)
#define DIFFEST_API __declspec(dllexport)
#else
#define DIFFEST_API __declspec(dllimport)
#endif
#else
#define DIFFEST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning dfs_status sets a thread-local message on failure. */
typedef enum dfs_status
{
  DFS_OK = 0,
  DFS_ERR_STRUCTURAL = 1,
  DFS_ERR_UNDERDETERMINED = 2,
  DFS_ERR_CONFIG = 3,
  DFS_ERR_DEGENERATE = 4,
  DFS_ERR_DETACHED = 5,
  DFS_ERR_INVALID_SHOCK = 6,
  DFS_ERR_ROOT_FIND = 7,
  DFS_ERR_GEOMETRY = 8,
  DFS_ERR_POSITIVITY = 9,
  DFS_ERR_IO = 10,
  DFS_ERR_INVALID_ARGUMENT = 11,
  DFS_ERR_INTERNAL = 99
} dfs_status;

typedef enum dfs_solver
{
  DFS_SOLVER_CLOSED_FORM = 0,
  DFS_SOLVER_GRADIENT = 1
} dfs_solver;

typedef enum dfs_shock_side
{
  DFS_SHOCK_LEFT = 0, /* flow turned counterclockwise */
  DFS_SHOCK_RIGHT = 1 /* flow turned clockwise */
} dfs_shock_side;

typedef struct dfs_ensemble dfs_ensemble;
typedef struct dfs_estimate dfs_estimate;
typedef struct dfs_experiment dfs_experiment;

typedef struct dfs_ip_options
{
  double alpha;
  double tau;      /* <= 0: 1 / (n + alpha) */
  double grad_tol; /* <= 0: 1e-10 * (1 + |f|) */
  int max_iters;
  dfs_solver solver;
} dfs_ip_options;

typedef struct dfs_primitive
{
  double rho;
  double u;
  double v;
  double p;
} dfs_primitive;

typedef struct dfs_shock
{
  dfs_primitive downstream;
  double beta; /* shock angle relative to the upstream flow, radians */
  double line_angle;
  double mach_up;
} dfs_shock;

typedef struct dfs_run_summary
{
  long steps;
  int converged;
  double final_residual;
  double wall_seconds;
} dfs_run_summary;

typedef struct dfs_sweep_summary
{
  double plateau_variation;
  double shift_at_reference;
  double endpoint_ratio;
} dfs_sweep_summary;

DIFFEST_API const char *dfs_version(void);
DIFFEST_API const char *dfs_last_error(void);
DIFFEST_API const char *dfs_status_name(dfs_status status);
DIFFEST_API void dfs_ip_options_default(dfs_ip_options *opt);

/* Point problem: n solution values (or n true errors) at one grid point. */
DIFFEST_API dfs_status dfs_solve_point(const double *values, int n, const dfs_ip_options *opt,
                                       double *du_out, double *functional_out);
DIFFEST_API dfs_status dfs_normal_solution(const double *true_errors, int n, double *du_out,
                                           double *shift_out);

/* Ensembles of vectorized fields on an nx x ny unit-square grid. */
DIFFEST_API dfs_status dfs_ensemble_create(int nx, int ny, int nvars, dfs_ensemble **out);
DIFFEST_API void dfs_ensemble_destroy(dfs_ensemble *e);
DIFFEST_API dfs_status dfs_ensemble_add(dfs_ensemble *e, const char *label, const double *values,
                                        size_t length);
DIFFEST_API dfs_status dfs_ensemble_size(const dfs_ensemble *e, size_t *size_out,
                                         size_t *length_out);

DIFFEST_API dfs_status dfs_estimate_solve(const dfs_ensemble *e, const dfs_ip_options *opt,
                                          dfs_estimate **out);
DIFFEST_API void dfs_estimate_destroy(dfs_estimate *est);
DIFFEST_API dfs_status dfs_estimate_get(const dfs_estimate *est, size_t solution, double *out,
                                        size_t length);

/* Metrics over equal-length vectors with uniform cell area. */
DIFFEST_API dfs_status dfs_effectivity_index(const double *est, const double *truth, size_t length,
                                             double cell_area, double *out);
DIFFEST_API dfs_status dfs_relative_accuracy(const double *est, const double *truth, size_t length,
                                             double cell_area, double *out);
DIFFEST_API dfs_status dfs_pearson(const double *a, const double *b, size_t length, double *out);

/* Gas dynamics. Angles in radians. */
DIFFEST_API dfs_status dfs_oblique_beta(double mach, double theta, double gamma, double *beta_out);
DIFFEST_API dfs_status dfs_oblique_shock(const dfs_primitive *upstream, double theta,
                                         dfs_shock_side side, double gamma, dfs_shock *out);

/* Steady march of a named case ("EdneyI", "EdneyVI", "FreeStream") with a scheme label.
 * Fields (rho, U, V, P) are written to `fields_out` when it is non-NULL; it must hold
 * 4 * nx * ny values. */
DIFFEST_API dfs_status dfs_march(const char *flow_case, int nx, int ny, const char *scheme,
                                 double cfl, double steady_tol, long max_steps,
                                 double *fields_out, dfs_run_summary *summary_out);

/* Scalar regularization sweep; rows of `du_out` hold n estimates per alpha. */
DIFFEST_API dfs_status dfs_scalar_sweep(const double *true_errors, int n, const double *alphas,
                                        int count, const dfs_ip_options *opt, const char *csv_path,
                                        double *du_out, dfs_sweep_summary *summary_out);

/* Experiments driven by a configuration file. */
DIFFEST_API dfs_status dfs_experiment_load(const char *config_path, dfs_experiment **out);
DIFFEST_API dfs_status dfs_experiment_parse(const char *config_text, dfs_experiment **out);
DIFFEST_API void dfs_experiment_destroy(dfs_experiment *x);
DIFFEST_API dfs_status dfs_experiment_set_output(dfs_experiment *x, const char *dir);
DIFFEST_API dfs_status dfs_experiment_run(dfs_experiment *x);
DIFFEST_API dfs_status dfs_experiment_report(dfs_experiment *x);
/* kind: "isolines", "error_slice" or "sweep". */
DIFFEST_API dfs_status dfs_experiment_dump(dfs_experiment *x, const char *kind);
/* JSON summary of the last run or report; owned by the handle. */
DIFFEST_API const char *dfs_experiment_summary(const dfs_experiment *x);

#ifdef __cplusplus
}
#endif

#endif
