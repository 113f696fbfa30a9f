/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface of the spdelab library. All objects are opaque handles created
 * by *_create / *_load / solver calls and released by the matching *_destroy.
 * Every fallible call returns a status; on failure spde_last_error() gives a
 * message for the calling thread, valid until the next call on that thread.
 */
#ifndef SPDELAB_SPDELAB_H
#define SPDELAB_SPDELAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPDELAB_BUILDING)
#define SPDE_API __attribute__((visibility("default")))
#else
#define SPDE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spde_status {
    SPDE_OK = 0,
    SPDE_E_INVALID_ARGUMENT = 1,
    SPDE_E_DIMENSION = 2,
    SPDE_E_DOMAIN = 3,
    SPDE_E_BLOW_UP = 4,
    SPDE_E_NOT_CONVERGED = 5,
    SPDE_E_CONFIG = 6,
    SPDE_E_IO = 7,
    SPDE_E_UNKNOWN_FAMILY = 8,
    SPDE_E_DEGENERATE = 9,
    SPDE_E_INTERNAL = 10
} spde_status;

typedef enum spde_coupling { SPDE_COUPLING_STANDARD = 0, SPDE_COUPLING_INTEGRATED = 1 } spde_coupling;

typedef struct spde_grid spde_grid;
typedef struct spde_coeffs spde_coeffs;
typedef struct spde_path spde_path;
typedef struct spde_control spde_control;
typedef struct spde_rate_result spde_rate_result;
typedef struct spde_config spde_config;

/* Solver settings; zero-initialise and call spde_solver_options_default. */
typedef struct spde_solver_options {
    size_t k_modes;      /* 0 = automatic */
    int use_k_noise;     /* nonzero: truncate the noise to k_noise modes */
    size_t k_noise;
    int use_R;           /* nonzero: chi_R cutoff with radius R */
    double R;
    double rho;
    spde_coupling coupling;
} spde_solver_options;

typedef struct spde_action_options {
    double mu0;
    double residual_tol;
    unsigned max_iter;
} spde_action_options;

SPDE_API const char* spde_version(void);
SPDE_API const char* spde_last_error(void);
SPDE_API const char* spde_status_name(spde_status status);
SPDE_API void spde_solver_options_default(spde_solver_options* opts);
SPDE_API void spde_action_options_default(spde_action_options* opts);

/* Grid */
SPDE_API spde_status spde_grid_create(uint32_t nx, uint32_t nt, double T, spde_grid** out);
SPDE_API spde_status spde_grid_info(const spde_grid* grid, uint32_t* nx, uint32_t* nt, double* T);
SPDE_API void spde_grid_destroy(spde_grid* grid);

/* Coefficients: builtin family with named parameters (keys may be NULL if n == 0). */
SPDE_API spde_status spde_coeffs_create(const char* family, const char* const* keys,
                                        const double* values, size_t n, spde_coeffs** out);
SPDE_API spde_status spde_coeffs_validate(const spde_coeffs* coeffs, size_t samples, int* all_passed);
SPDE_API void spde_coeffs_destroy(spde_coeffs* coeffs);

/* Paths: (nt+1) rows of nx-1 interior values. eta has nx-1 values. */
SPDE_API spde_status spde_solve(const spde_grid* grid, const spde_coeffs* coeffs, const double* eta,
                                size_t eta_len, double eps, uint64_t master_seed, uint64_t replica,
                                const spde_solver_options* opts, spde_path** out);
SPDE_API spde_status spde_solve_skeleton(const spde_grid* grid, const spde_coeffs* coeffs,
                                         const double* eta, size_t eta_len,
                                         const spde_control* psi, const spde_solver_options* opts,
                                         spde_path** out);
SPDE_API spde_status spde_solve_controlled(const spde_grid* grid, const spde_coeffs* coeffs,
                                           const double* eta, size_t eta_len,
                                           const spde_control* psi, double eps,
                                           uint64_t master_seed, uint64_t replica,
                                           const spde_solver_options* opts, spde_path** out);
SPDE_API spde_status spde_path_shape(const spde_path* path, size_t* rows, size_t* cols);
SPDE_API spde_status spde_path_copy(const spde_path* path, double* buffer, size_t len);
SPDE_API spde_status spde_path_save(const spde_path* path, const char* file);
SPDE_API spde_status spde_path_rate(const spde_path* path, const spde_coeffs* coeffs,
                                    double sigma_min, double* I);
SPDE_API void spde_path_destroy(spde_path* path);

/* Controls: nt rows of nx-1 values, time-major. */
SPDE_API spde_status spde_control_create(const spde_grid* grid, const double* values, size_t len,
                                         spde_control** out);
SPDE_API spde_status spde_control_load(const char* file, spde_control** out);
SPDE_API spde_status spde_control_save(const spde_control* psi, const char* file);
SPDE_API spde_status spde_control_rate(const spde_control* psi, double* I);
SPDE_API spde_status spde_girsanov_log_weight(const spde_control* psi, double eps,
                                              uint64_t master_seed, uint64_t replica,
                                              double* log_weight);
SPDE_API void spde_control_destroy(spde_control* psi);

/* Minimum action */
SPDE_API spde_status spde_minimize_action(const spde_grid* grid, const spde_coeffs* coeffs,
                                          const double* target, size_t target_len,
                                          const double* eta, size_t eta_len,
                                          const spde_action_options* opts,
                                          spde_rate_result** out);
SPDE_API spde_status spde_rate_result_info(const spde_rate_result* result, double* I,
                                           double* residual, unsigned* iterations, int* converged);
SPDE_API spde_status spde_rate_result_control(const spde_rate_result* result, spde_control** out);
SPDE_API void spde_rate_result_destroy(spde_rate_result* result);

/* Experiment configuration and dispatch */
SPDE_API spde_status spde_config_create(spde_config** out);
SPDE_API spde_status spde_config_load(const char* file, spde_config** out);
SPDE_API spde_status spde_config_set(spde_config* config, const char* key, const char* value);
SPDE_API spde_status spde_config_get(const spde_config* config, const char* key, char* buffer,
                                     size_t len);
SPDE_API spde_status spde_run_experiment(const spde_config* config, size_t* files_written);
SPDE_API void spde_config_destroy(spde_config* config);
/* Comma separated list of experiment kinds / coefficient families. */
SPDE_API const char* spde_experiment_kinds(void);
SPDE_API const char* spde_coefficient_families(void);

#ifdef __cplusplus
}
#endif

#endif
