// SPDX-License-Identifier: Apache-2.0
#include "spde/mild_solver.hpp"

#include "spde/error.hpp"
#include "spde/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spde {

namespace {

bool quadratic_flux(const CoefficientSet& c) { return static_cast<bool>(c.g2); }

}  // namespace

std::size_t SolverConfig::resolved_modes(const GridSpec& grid) const {
    return K_modes == 0 ? grid.interior() : K_modes;
}

void SolverConfig::validate(const GridSpec& grid, const CoefficientSet& coeffs) const {
    const std::size_t n = grid.interior();
    require(K_modes <= n, ErrorCode::Config,
            "K_modes = " + std::to_string(K_modes) + " exceeds nx-1 = " + std::to_string(n));
    if (K_noise) {
        require(*K_noise <= n, ErrorCode::Config,
                "K_noise = " + std::to_string(*K_noise) + " exceeds nx-1 = " + std::to_string(n));
    }
    if (R) require(std::isfinite(*R) && *R > 0.0, ErrorCode::Config, "R must be > 0");
    if (truncation_level) require(*truncation_level >= 1, ErrorCode::Config, "truncation level must be >= 1");
    require(delta > 0.0, ErrorCode::Config, "delta must be > 0");
    require(picard_tol > 0.0, ErrorCode::Config, "picard_tol must be > 0");
    require(picard_max_iter >= 1, ErrorCode::Config, "picard_max_iter must be >= 1");
    require(rho >= 1.0, ErrorCode::Config, "rho must be >= 1");
    if (quadratic_flux(coeffs) && K_modes != 0) {
        const std::size_t K = K_modes;
        require(grid.nx >= 4 * K, ErrorCode::Config,
                "quadratic flux needs nx >= 4*K_modes (nx = " + std::to_string(grid.nx) +
                    ", K_modes = " + std::to_string(K) + "); set K_modes <= " +
                    std::to_string(grid.nx / 4));
    }
}

MildStepper::MildStepper(const GridSpec& grid, const CoefficientSet& coeffs,
                         const SolverConfig& config)
    : grid_(grid),
      coeffs_(config.truncation_level ? truncate_coefficients(coeffs, *config.truncation_level)
                                      : coeffs),
      basis_(SpectralBasis::get(grid.nx)),
      K_(config.resolved_modes(grid)) {
    config.validate(grid, coeffs);
    if (config.K_modes == 0 && quadratic_flux(coeffs)) K_ = std::max<std::size_t>(1, grid.nx / 4);
    const std::size_t n = grid.interior();
    decay_.resize(n);
    divergence_.resize(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double lam = basis::eigenvalue(k);
        decay_[k - 1] = std::exp(-lam * grid.dt);
        divergence_[k - 1] = std::expm1(-lam * grid.dt) / lam;
    }
}

void MildStepper::nodal_g(std::size_t m, std::span<const double> u, double weight,
                          std::span<double> nodal) const {
    const double t = grid_.time(m);
    const std::size_t n = grid_.interior();
    nodal[0] = weight * coeffs_.eval_g(t, 0.0, 0.0);
    for (std::size_t j = 1; j <= n; ++j) nodal[j] = weight * coeffs_.eval_g(t, grid_.node(j), u[j - 1]);
    nodal[n + 1] = weight * coeffs_.eval_g(t, 1.0, 0.0);
}

void MildStepper::step(std::size_t m, std::span<const double> lin, std::span<const double> eval,
                       const StepInputs& in, std::span<double> out) const {
    const std::size_t n = grid_.interior();
    const double t = grid_.time(m);
    const double dt = grid_.dt;
    const double w = in.weight;
    std::vector<double> a(lin.begin(), lin.end());

    if (w != 0.0) {
        if (coeffs_.has_f()) {
            for (std::size_t j = 0; j < n; ++j) a[j] += dt * w * coeffs_.f(t, grid_.node(j + 1), eval[j]);
        }
        const bool noisy = in.sqrt_eps != 0.0 && !in.white.empty();
        const bool controlled = !in.control.empty();
        if (noisy || controlled) {
            const double inv_dx = 1.0 / grid_.dx;
            for (std::size_t j = 0; j < n; ++j) {
                const double s = w * coeffs_.eval_sigma(t, grid_.node(j + 1), eval[j]);
                double drive;
                if (noisy && controlled) drive = in.sqrt_eps * in.white[j] * inv_dx + dt * in.control[j];
                else if (noisy) drive = in.sqrt_eps * in.white[j] * inv_dx;
                else drive = dt * in.control[j];
                a[j] += s * drive;
            }
        }
    }

    std::vector<double> c(n);
    basis_->forward(a, c);
    for (std::size_t k = 0; k < n; ++k) c[k] *= decay_[k];
    if (w != 0.0 && coeffs_.has_g()) {
        std::vector<double> nodal(n + 2), p(n);
        nodal_g(m, eval, w, nodal);
        basis_->derivative_pairing(nodal, p);
        for (std::size_t k = 0; k < n; ++k) c[k] += divergence_[k] * p[k];
    }
    for (std::size_t k = K_; k < n; ++k) c[k] = 0.0;
    basis_->inverse(c, out);
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(out[j])) {
            throw BlowUpError(m + 1, "blow-up: non-finite state at step " + std::to_string(m + 1) +
                                         " (t = " + std::to_string(grid_.time(m + 1)) + ")");
        }
    }
}

void MildStepper::apply_semigroup(std::span<double> field) const {
    const std::size_t n = grid_.interior();
    std::vector<double> c(n);
    basis_->forward(field, c);
    for (std::size_t k = 0; k < n; ++k) c[k] = k < K_ ? c[k] * decay_[k] : 0.0;
    basis_->inverse(c, field);
}

// P D restricted to interior columns is T^{-1} diag(d) P C_int; its transpose
// is C_int^T P diag(d) T^{-T} with T^{-T} = T / dx.
void MildStepper::add_divergence_transpose(std::span<const double> p, std::span<double> out) const {
    const std::size_t n = grid_.interior();
    std::vector<double> c(n), r(n);
    basis_->forward(p, c);
    for (std::size_t k = 0; k < n; ++k) c[k] = k < K_ ? c[k] * divergence_[k] / grid_.dx : 0.0;
    basis_->derivative_pairing_transpose(c, r);
    for (std::size_t j = 0; j < n; ++j) out[j] += r[j];
}

void integrate(const MildStepper& stepper, const Field& eta, const Forcing& forcing,
               const StateObserver& observe, std::vector<double>* cutoffs) {
    const GridSpec& g = stepper.grid();
    require(eta.nx() == g.nx && eta.size() == g.interior(), ErrorCode::Dimension,
            "initial datum does not match the grid");
    require(eta.all_finite(), ErrorCode::InvalidArgument, "initial datum has non-finite entries");
    if (forcing.noise) {
        require(forcing.noise->grid == g, ErrorCode::Dimension, "noise realization grid mismatch");
    }
    if (forcing.control) {
        require(forcing.control->size() == static_cast<std::size_t>(g.nt) * g.interior(),
                ErrorCode::Dimension, "control dimensions do not match the grid");
    }
    require(forcing.eps >= 0.0, ErrorCode::InvalidArgument, "eps must be >= 0");
    const std::size_t n = g.interior();
    std::vector<double> u(eta.values().begin(), eta.values().end()), next(n);
    const double sqrt_eps = std::sqrt(forcing.eps);
    const bool noisy = forcing.noise && !forcing.noise->is_zero() && forcing.eps > 0.0;
    if (cutoffs) cutoffs->assign(g.nt + 1, 1.0);
    if (observe) observe(0, u);
    for (std::size_t m = 0; m < g.nt; ++m) {
        StepInputs in;
        if (forcing.R) {
            in.weight = chi_R(lp_norm(u, g.dx, forcing.rho), *forcing.R);
            if (cutoffs) (*cutoffs)[m] = in.weight;
        }
        if (noisy) {
            in.sqrt_eps = sqrt_eps;
            in.white = forcing.noise->white(m);
        }
        if (forcing.control) {
            in.control = std::span<const double>(forcing.control->data() + m * n, n);
        }
        stepper.step(m, u, u, in, next);
        u.swap(next);
        if (observe) observe(m + 1, u);
    }
}

namespace {

StepDiagnostics diagnose(const MildStepper& stepper, std::size_t m, std::span<const double> u,
                         double rho) {
    const GridSpec& g = stepper.grid();
    StepDiagnostics d;
    d.lrho_norm = lp_norm(u, g.dx, rho);
    d.l2_norm = lp_norm(u, g.dx, 2.0);
    if (stepper.coeffs().has_g()) {
        double s = 0.0;
        const double t = g.time(m);
        for (std::size_t j = 0; j < u.size(); ++j) {
            s = std::max(s, std::abs(stepper.coeffs().eval_dg(t, g.node(j + 1), u[j])));
        }
        d.stability = g.dt * s / g.dx;
    }
    return d;
}

}  // namespace

PathSolution integrate_path(const MildStepper& stepper, const Field& eta, const Forcing& forcing,
                            const SolverConfig& config, const SeedDerivation& seed) {
    PathSolution path;
    path.grid = stepper.grid();
    path.seed = seed;
    path.eps = forcing.eps;
    path.config = config;
    path.states.reserve(path.grid.nt + 1);
    path.diagnostics.reserve(path.grid.nt + 1);
    std::vector<double> cutoffs;
    integrate(stepper, eta, forcing,
              [&](std::size_t m, std::span<const double> u) {
                  path.states.emplace_back(path.grid.nx, std::vector<double>(u.begin(), u.end()));
                  path.diagnostics.push_back(diagnose(stepper, m, u, config.rho));
              },
              &cutoffs);
    for (std::size_t m = 0; m < path.diagnostics.size(); ++m) path.diagnostics[m].cutoff = cutoffs[m];
    return path;
}

PathSolution solve_with_noise(const Field& eta, const CoefficientSet& coeffs, double eps,
                              const NoiseRealization& noise, const SolverConfig& config) {
    const MildStepper stepper(noise.grid, coeffs, config);
    Forcing forcing;
    forcing.noise = &noise;
    forcing.eps = eps;
    forcing.R = config.R;
    forcing.rho = config.rho;
    return integrate_path(stepper, eta, forcing, config, noise.seed);
}

PathSolution solve_spde(const Field& eta, const CoefficientSet& coeffs, double eps,
                        const SeedDerivation& seed, const GridSpec& grid,
                        const SolverConfig& config) {
    require(eps >= 0.0, ErrorCode::InvalidArgument, "eps must be >= 0");
    const MildStepper stepper(grid, coeffs, config);
    Forcing forcing;
    forcing.eps = eps;
    forcing.R = config.R;
    forcing.rho = config.rho;
    NoiseRealization noise;
    if (eps > 0.0) {
        noise = config.K_noise ? sample_sheet_expansion(grid, *config.K_noise, seed)
                               : sample_white_increments(grid, seed);
        forcing.noise = &noise;
    }
    return integrate_path(stepper, eta, forcing, config, seed);
}

PathSolution solve_truncated(const Field& eta, const CoefficientSet& coeffs, double R, double eps,
                             const SeedDerivation& seed, const GridSpec& grid,
                             const SolverConfig& config) {
    require(std::isfinite(R) && R > 0.0, ErrorCode::InvalidArgument, "R must be > 0");
    SolverConfig c = config;
    c.R = R;
    return solve_spde(eta, coeffs, eps, seed, grid, c);
}

PathSolution solve_galerkin_noise(const Field& eta, const CoefficientSet& coeffs, std::size_t k,
                                  double eps, const SeedDerivation& seed, const GridSpec& grid,
                                  const SolverConfig& config) {
    require(k <= grid.interior(), ErrorCode::InvalidArgument,
            "Galerkin noise level k must satisfy 0 <= k <= nx-1");
    SolverConfig c = config;
    c.K_noise = k;
    return solve_spde(eta, coeffs, eps, seed, grid, c);
}

double weighted_path_distance(const std::vector<Field>& a, const std::vector<Field>& b,
                              const GridSpec& grid, double delta, double rho) {
    require(a.size() == b.size(), ErrorCode::Dimension, "paths have different lengths");
    double d = 0.0;
    std::vector<double> diff;
    for (std::size_t m = 0; m < a.size(); ++m) {
        diff.resize(a[m].size());
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = a[m][j] - b[m][j];
        d = std::max(d, std::exp(-delta * grid.time(m)) * lp_norm(diff, grid.dx, rho));
    }
    return d;
}

double weighted_path_distance(const PathSolution& a, const PathSolution& b, double delta,
                              double rho) {
    return weighted_path_distance(a.states, b.states, a.grid, delta, rho);
}

double sup_path_distance(const PathSolution& a, const PathSolution& b, double p) {
    return weighted_path_distance(a.states, b.states, a.grid, 0.0, p);
}

PicardResult picard_solve(const Field& eta, const CoefficientSet& coeffs, double eps,
                          const NoiseRealization* noise, const GridSpec& grid, double tol,
                          unsigned max_iter, const SolverConfig& config) {
    require(tol > 0.0, ErrorCode::InvalidArgument, "Picard tolerance must be > 0");
    require(max_iter >= 1, ErrorCode::InvalidArgument, "Picard max_iter must be >= 1");
    require(eta.nx() == grid.nx, ErrorCode::Dimension, "initial datum does not match the grid");
    if (eps > 0.0) {
        require(noise != nullptr, ErrorCode::InvalidArgument,
                "Picard iteration with eps > 0 needs a fixed noise realization");
        require(noise->grid == grid, ErrorCode::Dimension, "noise realization grid mismatch");
    }
    const MildStepper stepper(grid, coeffs, config);
    const double sqrt_eps = std::sqrt(eps);

    // Initial guess: free heat flow S_t eta.
    std::vector<Field> current;
    current.reserve(grid.nt + 1);
    current.push_back(eta);
    for (std::size_t m = 0; m < grid.nt; ++m) {
        Field next = current.back();
        stepper.apply_semigroup(next.values());
        current.push_back(std::move(next));
    }

    PicardResult result;
    std::vector<Field> updated(grid.nt + 1, Field(grid.nx));
    for (unsigned it = 1; it <= max_iter; ++it) {
        updated[0] = eta;
        for (std::size_t m = 0; m < grid.nt; ++m) {
            StepInputs in;
            if (config.R) in.weight = chi_R(lp_norm(current[m], config.rho), *config.R);
            if (eps > 0.0 && noise && !noise->is_zero()) {
                in.sqrt_eps = sqrt_eps;
                in.white = noise->white(m);
            }
            stepper.step(m, updated[m].values(), current[m].values(), in, updated[m + 1].values());
        }
        const double d = weighted_path_distance(updated, current, grid, config.delta, config.rho);
        result.distances.push_back(d);
        current.swap(updated);
        if (d <= tol) {
            result.iterations = it;
            result.path.grid = grid;
            result.path.eps = eps;
            result.path.config = config;
            if (noise) result.path.seed = noise->seed;
            result.path.states = std::move(current);
            for (std::size_t m = 0; m < result.path.states.size(); ++m) {
                result.path.diagnostics.push_back(
                    diagnose(stepper, m, result.path.states[m].values(), config.rho));
            }
            return result;
        }
    }
    fail(ErrorCode::NotConverged, "Picard iteration did not reach tol = " + std::to_string(tol) +
                                      " within " + std::to_string(max_iter) +
                                      " iterations (last distance " +
                                      std::to_string(result.distances.back()) + ")");
}

MomentEstimate estimate_moments(const Field& eta, const CoefficientSet& coeffs, double eps,
                                double rho, std::size_t replicas, const GridSpec& grid,
                                const SolverConfig& config, std::uint64_t master_seed,
                                unsigned threads) {
    require(replicas >= 1, ErrorCode::InvalidArgument, "replicas must be >= 1");
    require(rho >= 1.0, ErrorCode::InvalidArgument, "rho must be >= 1");
    const MildStepper stepper(grid, coeffs, config);
    MomentEstimate est;
    est.replicas = replicas;
    const double eta_norm = std::pow(lp_norm(eta, rho), rho);

    auto run_one = [&](const NoiseRealization* noise) {
        Forcing forcing;
        forcing.noise = noise;
        forcing.eps = eps;
        forcing.R = config.R;
        forcing.rho = config.rho;
        double sup = 0.0;
        integrate(stepper, eta, forcing, [&](std::size_t, std::span<const double> u) {
            sup = std::max(sup, std::pow(lp_norm(u, grid.dx, rho), rho));
        });
        return sup;
    };

    if (eps == 0.0) {
        est.estimate = run_one(nullptr);
        est.std_error = 0.0;
        est.ratio = est.estimate / (1.0 + eta_norm);
        return est;
    }

    std::vector<double> values(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) {
        const SeedDerivation seed{master_seed, r, 0};
        const NoiseRealization noise =
            config.K_noise ? sample_sheet_expansion(grid, *config.K_noise, seed)
                           : sample_white_increments(grid, seed);
        try {
            values[r] = run_one(&noise);
        } catch (const BlowUpError& e) {
            throw BlowUpError(e.step(), std::string(e.what()) + " in replica " + std::to_string(r) +
                                            " (master seed " + std::to_string(master_seed) + ")");
        }
    });
    const SampleStats s = sample_stats(values);
    est.estimate = s.mean;
    est.std_error = s.std_error;
    est.ratio = est.estimate / (1.0 + eta_norm);
    return est;
}

}  // namespace spde
