// SPDX-License-Identifier: Apache-2.0
#include "spdelab/spdelab.h"

#include "spde/action.hpp"
#include "spde/config.hpp"
#include "spde/control.hpp"
#include "spde/error.hpp"
#include "spde/experiments.hpp"
#include "spde/persist.hpp"

#include <cstring>
#include <new>
#include <string>

struct spde_grid {
    spde::GridSpec grid;
};
struct spde_coeffs {
    spde::CoefficientSet set;
};
struct spde_path {
    spde::PathSolution path;
};
struct spde_control {
    spde::Control psi;
};
struct spde_rate_result {
    spde::RateResult result;
};
struct spde_config {
    spde::ConfigMap map;
};

namespace {

thread_local std::string last_error;

spde_status to_status(spde::ErrorCode c) { return static_cast<spde_status>(static_cast<int>(c)); }

template <class Fn>
spde_status guarded(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return SPDE_OK;
    } catch (const spde::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SPDE_E_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SPDE_E_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return SPDE_E_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    spde::require(p != nullptr, spde::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

spde::SolverConfig solver_config(const spde_solver_options* o) {
    spde::SolverConfig c;
    if (!o) return c;
    c.K_modes = o->k_modes;
    if (o->use_k_noise) c.K_noise = o->k_noise;
    if (o->use_R) c.R = o->R;
    if (o->rho > 0.0) c.rho = o->rho;
    c.coupling = o->coupling == SPDE_COUPLING_INTEGRATED ? spde::Coupling::Integrated
                                                         : spde::Coupling::Standard;
    return c;
}

spde::Field field(const spde::GridSpec& g, const double* v, size_t len, const char* what) {
    spde::require(len == g.interior(), spde::ErrorCode::Dimension,
                  std::string(what) + " needs nx-1 = " + std::to_string(g.interior()) + " values, got " +
                      std::to_string(len));
    if (len) need(v, what);
    return spde::Field(g.nx, std::vector<double>(v, v + len));
}

std::string join_names(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
}

}  // namespace

extern "C" {

const char* spde_version(void) { return spde::version_string(); }

const char* spde_last_error(void) { return last_error.c_str(); }

const char* spde_status_name(spde_status status) {
    if (status == SPDE_OK) return "ok";
    if (status < SPDE_E_INVALID_ARGUMENT || status > SPDE_E_INTERNAL) return "unknown";
    return spde::to_string(static_cast<spde::ErrorCode>(status));
}

void spde_solver_options_default(spde_solver_options* opts) {
    if (!opts) return;
    std::memset(opts, 0, sizeof *opts);
    opts->rho = 8.0;
    opts->coupling = SPDE_COUPLING_STANDARD;
}

void spde_action_options_default(spde_action_options* opts) {
    if (!opts) return;
    const spde::ActionOptions d;
    opts->mu0 = d.mu0;
    opts->residual_tol = d.residual_tol;
    opts->max_iter = d.max_iter;
}

spde_status spde_grid_create(uint32_t nx, uint32_t nt, double T, spde_grid** out) {
    return guarded([&] {
        need(out, "out");
        *out = new spde_grid{spde::make_grid(nx, nt, T)};
    });
}

spde_status spde_grid_info(const spde_grid* grid, uint32_t* nx, uint32_t* nt, double* T) {
    return guarded([&] {
        need(grid, "grid");
        if (nx) *nx = grid->grid.nx;
        if (nt) *nt = grid->grid.nt;
        if (T) *T = grid->grid.T;
    });
}

void spde_grid_destroy(spde_grid* grid) { delete grid; }

spde_status spde_coeffs_create(const char* family, const char* const* keys, const double* values,
                               size_t n, spde_coeffs** out) {
    return guarded([&] {
        need(family, "family");
        need(out, "out");
        std::map<std::string, double> params;
        if (n) {
            need(keys, "keys");
            need(values, "values");
        }
        for (size_t i = 0; i < n; ++i) {
            need(keys[i], "key");
            params[keys[i]] = values[i];
        }
        *out = new spde_coeffs{spde::make_coefficients(family, params)};
    });
}

spde_status spde_coeffs_validate(const spde_coeffs* coeffs, size_t samples, int* all_passed) {
    return guarded([&] {
        need(coeffs, "coeffs");
        need(all_passed, "all_passed");
        const auto rep = spde::validate_assumptions(coeffs->set, spde::AssumptionBox{}, samples);
        *all_passed = rep.all_passed() ? 1 : 0;
    });
}

void spde_coeffs_destroy(spde_coeffs* coeffs) { delete coeffs; }

spde_status spde_solve(const spde_grid* grid, const spde_coeffs* coeffs, const double* eta,
                       size_t eta_len, double eps, uint64_t master_seed, uint64_t replica,
                       const spde_solver_options* opts, spde_path** out) {
    return guarded([&] {
        need(grid, "grid");
        need(coeffs, "coeffs");
        need(out, "out");
        const auto& g = grid->grid;
        auto p = spde::solve_spde(field(g, eta, eta_len, "eta"), coeffs->set, eps,
                                  spde::SeedDerivation{master_seed, replica, 0}, g, solver_config(opts));
        *out = new spde_path{std::move(p)};
    });
}

spde_status spde_solve_skeleton(const spde_grid* grid, const spde_coeffs* coeffs, const double* eta,
                                size_t eta_len, const spde_control* psi,
                                const spde_solver_options* opts, spde_path** out) {
    return guarded([&] {
        need(grid, "grid");
        need(coeffs, "coeffs");
        need(psi, "psi");
        need(out, "out");
        const auto& g = grid->grid;
        auto p = spde::solve_skeleton(field(g, eta, eta_len, "eta"), coeffs->set, psi->psi, g,
                                      solver_config(opts));
        *out = new spde_path{std::move(p)};
    });
}

spde_status spde_solve_controlled(const spde_grid* grid, const spde_coeffs* coeffs, const double* eta,
                                  size_t eta_len, const spde_control* psi, double eps,
                                  uint64_t master_seed, uint64_t replica,
                                  const spde_solver_options* opts, spde_path** out) {
    return guarded([&] {
        need(grid, "grid");
        need(coeffs, "coeffs");
        need(psi, "psi");
        need(out, "out");
        const auto& g = grid->grid;
        auto p = spde::solve_controlled(field(g, eta, eta_len, "eta"), coeffs->set, psi->psi, eps,
                                        spde::SeedDerivation{master_seed, replica, 0}, g,
                                        solver_config(opts));
        *out = new spde_path{std::move(p)};
    });
}

spde_status spde_path_shape(const spde_path* path, size_t* rows, size_t* cols) {
    return guarded([&] {
        need(path, "path");
        if (rows) *rows = path->path.states.size();
        if (cols) *cols = path->path.grid.interior();
    });
}

spde_status spde_path_copy(const spde_path* path, double* buffer, size_t len) {
    return guarded([&] {
        need(path, "path");
        need(buffer, "buffer");
        const size_t n = path->path.grid.interior();
        spde::require(len == path->path.states.size() * n, spde::ErrorCode::Dimension,
                      "buffer must hold rows*cols values");
        for (size_t m = 0; m < path->path.states.size(); ++m) {
            std::memcpy(buffer + m * n, path->path.states[m].storage().data(), n * sizeof(double));
        }
    });
}

spde_status spde_path_save(const spde_path* path, const char* file) {
    return guarded([&] {
        need(path, "path");
        need(file, "file");
        std::vector<double> flat;
        for (const auto& f : path->path.states) flat.insert(flat.end(), f.storage().begin(), f.storage().end());
        spde::write_snapshot(file, path->path.grid, flat);
    });
}

spde_status spde_path_rate(const spde_path* path, const spde_coeffs* coeffs, double sigma_min, double* I) {
    return guarded([&] {
        need(path, "path");
        need(coeffs, "coeffs");
        need(I, "I");
        *I = spde::path_rate_function(path->path.states, coeffs->set, path->path.grid, sigma_min,
                                      path->path.config)
                 .I;
    });
}

void spde_path_destroy(spde_path* path) { delete path; }

spde_status spde_control_create(const spde_grid* grid, const double* values, size_t len,
                                spde_control** out) {
    return guarded([&] {
        need(grid, "grid");
        need(out, "out");
        if (len) need(values, "values");
        *out = new spde_control{spde::Control(grid->grid, std::vector<double>(values, values + len))};
    });
}

spde_status spde_control_load(const char* file, spde_control** out) {
    return guarded([&] {
        need(file, "file");
        need(out, "out");
        *out = new spde_control{spde::load_control(file)};
    });
}

spde_status spde_control_save(const spde_control* psi, const char* file) {
    return guarded([&] {
        need(psi, "psi");
        need(file, "file");
        spde::save_control(file, psi->psi);
    });
}

spde_status spde_control_rate(const spde_control* psi, double* I) {
    return guarded([&] {
        need(psi, "psi");
        need(I, "I");
        *I = spde::rate_functional(psi->psi).I;
    });
}

spde_status spde_girsanov_log_weight(const spde_control* psi, double eps, uint64_t master_seed,
                                     uint64_t replica, double* log_weight) {
    return guarded([&] {
        need(psi, "psi");
        need(log_weight, "log_weight");
        const auto noise =
            spde::sample_white_increments(psi->psi.grid(), spde::SeedDerivation{master_seed, replica, 0});
        *log_weight = spde::girsanov_log_weight(psi->psi, noise, eps);
    });
}

void spde_control_destroy(spde_control* psi) { delete psi; }

spde_status spde_minimize_action(const spde_grid* grid, const spde_coeffs* coeffs, const double* target,
                                 size_t target_len, const double* eta, size_t eta_len,
                                 const spde_action_options* opts, spde_rate_result** out) {
    return guarded([&] {
        need(grid, "grid");
        need(coeffs, "coeffs");
        need(out, "out");
        const auto& g = grid->grid;
        spde::ActionOptions o;
        if (opts) {
            o.mu0 = opts->mu0;
            o.residual_tol = opts->residual_tol;
            o.max_iter = opts->max_iter;
        }
        auto r = spde::minimize_action(field(g, target, target_len, "target"),
                                       field(g, eta, eta_len, "eta"), coeffs->set, g, o);
        *out = new spde_rate_result{std::move(r)};
    });
}

spde_status spde_rate_result_info(const spde_rate_result* result, double* I, double* residual,
                                  unsigned* iterations, int* converged) {
    return guarded([&] {
        need(result, "result");
        if (I) *I = result->result.I;
        if (residual) *residual = result->result.residual;
        if (iterations) *iterations = result->result.iterations;
        if (converged) *converged = result->result.converged ? 1 : 0;
    });
}

spde_status spde_rate_result_control(const spde_rate_result* result, spde_control** out) {
    return guarded([&] {
        need(result, "result");
        need(out, "out");
        *out = new spde_control{result->result.psi};
    });
}

void spde_rate_result_destroy(spde_rate_result* result) { delete result; }

spde_status spde_config_create(spde_config** out) {
    return guarded([&] {
        need(out, "out");
        *out = new spde_config{};
    });
}

spde_status spde_config_load(const char* file, spde_config** out) {
    return guarded([&] {
        need(file, "file");
        need(out, "out");
        *out = new spde_config{spde::ConfigMap::load(file)};
    });
}

spde_status spde_config_set(spde_config* config, const char* key, const char* value) {
    return guarded([&] {
        need(config, "config");
        need(key, "key");
        need(value, "value");
        config->map.set(key, value);
    });
}

spde_status spde_config_get(const spde_config* config, const char* key, char* buffer, size_t len) {
    return guarded([&] {
        need(config, "config");
        need(key, "key");
        need(buffer, "buffer");
        const std::string& v = config->map.get_string(key);
        spde::require(v.size() < len, spde::ErrorCode::InvalidArgument, "buffer too small");
        std::memcpy(buffer, v.c_str(), v.size() + 1);
    });
}

spde_status spde_run_experiment(const spde_config* config, size_t* files_written) {
    return guarded([&] {
        need(config, "config");
        const auto files = spde::run_experiment(config->map);
        if (files_written) *files_written = files.size();
    });
}

void spde_config_destroy(spde_config* config) { delete config; }

const char* spde_experiment_kinds(void) {
    static const std::string s = join_names(spde::experiment_kinds());
    return s.c_str();
}

const char* spde_coefficient_families(void) {
    static const std::string s = join_names(spde::coefficient_families());
    return s.c_str();
}

}  // extern "C"
