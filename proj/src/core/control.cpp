// SPDX-License-Identifier: Apache-2.0
#include "spde/control.hpp"

#include "spde/error.hpp"
#include "spde/parallel.hpp"
#include "spde/persist.hpp"

#include <algorithm>
#include <cmath>

namespace spde {

double control_squared_norm(std::span<const double> values, const GridSpec& grid) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = values[i] * values[i];
    return pairwise_sum(sq) * grid.dt * grid.dx;
}

Control::Control(const GridSpec& grid)
    : grid_(grid), values_(static_cast<std::size_t>(grid.nt) * grid.interior(), 0.0) {}

Control::Control(const GridSpec& grid, std::vector<double> values, std::optional<double> N)
    : grid_(grid), values_(std::move(values)), radius_(N) {
    require(values_.size() == static_cast<std::size_t>(grid.nt) * grid.interior(),
            ErrorCode::Dimension,
            "control has " + std::to_string(values_.size()) + " values, grid needs nt*(nx-1) = " +
                std::to_string(static_cast<std::size_t>(grid.nt) * grid.interior()));
    for (double v : values_) {
        require(std::isfinite(v), ErrorCode::InvalidArgument, "control has non-finite entries");
    }
    squared_norm_ = control_squared_norm(values_, grid_);
    if (radius_) {
        require(squared_norm_ <= *radius_, ErrorCode::Domain,
                "control is outside the admissible set (norm^2 " + std::to_string(squared_norm_) +
                    " > N = " + std::to_string(*radius_) + ")");
    }
}

Control Control::from_function(const GridSpec& grid,
                               const std::function<double(double, double)>& fn) {
    const std::size_t n = grid.interior();
    std::vector<double> v(static_cast<std::size_t>(grid.nt) * n);
    for (std::size_t m = 0; m < grid.nt; ++m) {
        for (std::size_t j = 0; j < n; ++j) v[m * n + j] = fn(grid.time(m), grid.node(j + 1));
    }
    return Control(grid, std::move(v));
}

bool Control::is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

std::vector<double> effective_control(const Control& psi, Coupling coupling) {
    if (coupling == Coupling::Standard) return psi.storage();
    const GridSpec& g = psi.grid();
    const std::size_t n = g.interior();
    std::vector<double> out(psi.storage().size());
    for (std::size_t m = 0; m < g.nt; ++m) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += psi.storage()[m * n + j] * g.dx;
            out[m * n + j] = acc;
        }
    }
    return out;
}

namespace {

void check_control_grid(const Control& psi, const GridSpec& grid) {
    require(psi.grid() == grid, ErrorCode::Dimension, "control grid does not match the solve grid");
}

PathSolution run_controlled(const Field& eta, const CoefficientSet& coeffs, const Control& psi,
                            double eps, const NoiseRealization* noise, const GridSpec& grid,
                            const SolverConfig& config, const SeedDerivation& seed) {
    check_control_grid(psi, grid);
    const MildStepper stepper(grid, coeffs, config);
    Forcing forcing;
    forcing.noise = noise;
    forcing.eps = eps;
    forcing.R = config.R;
    forcing.rho = config.rho;
    std::vector<double> eff;
    if (!psi.is_zero()) {
        eff = effective_control(psi, config.coupling);
        forcing.control = &eff;
    }
    return integrate_path(stepper, eta, forcing, config, seed);
}

}  // namespace

PathSolution solve_skeleton(const Field& eta, const CoefficientSet& coeffs, const Control& psi,
                            const GridSpec& grid, const SolverConfig& config) {
    return run_controlled(eta, coeffs, psi, 0.0, nullptr, grid, config, SeedDerivation{});
}

PathSolution solve_controlled(const Field& eta, const CoefficientSet& coeffs, const Control& psi,
                              double eps, const SeedDerivation& seed, const GridSpec& grid,
                              const SolverConfig& config) {
    require(eps >= 0.0, ErrorCode::InvalidArgument, "eps must be >= 0");
    if (eps == 0.0) return run_controlled(eta, coeffs, psi, 0.0, nullptr, grid, config, seed);
    const NoiseRealization noise = config.K_noise ? sample_sheet_expansion(grid, *config.K_noise, seed)
                                                  : sample_white_increments(grid, seed);
    return run_controlled(eta, coeffs, psi, eps, &noise, grid, config, seed);
}

PathSolution solve_controlled_with_noise(const Field& eta, const CoefficientSet& coeffs,
                                         const Control& psi, double eps,
                                         const NoiseRealization& noise,
                                         const SolverConfig& config) {
    require(eps >= 0.0, ErrorCode::InvalidArgument, "eps must be >= 0");
    return run_controlled(eta, coeffs, psi, eps, eps > 0.0 ? &noise : nullptr, noise.grid, config,
                          noise.seed);
}

RateValue rate_functional(const Control& psi, std::optional<double> N) {
    RateValue r;
    r.I = 0.5 * psi.squared_norm();
    if (N) r.admissible = psi.squared_norm() <= *N;
    return r;
}

double control_pairing(std::span<const double> psi, const NoiseRealization& noise) {
    require(psi.size() == noise.white_increments.size(), ErrorCode::Dimension,
            "control and noise are on different grids");
    std::vector<double> prod(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) prod[i] = psi[i] * noise.white_increments[i];
    return pairwise_sum(prod);
}

double girsanov_log_weight(const Control& psi, const NoiseRealization& noise, double eps,
                           Coupling coupling) {
    require(eps > 0.0 && std::isfinite(eps), ErrorCode::InvalidArgument,
            "girsanov_log_weight needs eps > 0");
    require(psi.grid() == noise.grid, ErrorCode::Dimension,
            "control and noise are on different grids");
    if (psi.is_zero()) return 0.0;
    const std::vector<double> eff = effective_control(psi, coupling);
    const double pairing = control_pairing(eff, noise);
    const double norm2 = control_squared_norm(eff, psi.grid());
    return -pairing / std::sqrt(eps) - norm2 / (2.0 * eps);
}

void save_control(const std::string& path, const Control& psi) {
    write_snapshot(path, psi.grid(), psi.values());
}

Control load_control(const std::string& path) {
    Snapshot s = read_snapshot(path);
    require(s.rows == s.nt, ErrorCode::Io,
            "'" + path + "' holds " + std::to_string(s.rows) + " rows, a control needs nt = " +
                std::to_string(s.nt));
    return Control(make_grid(s.nx, s.nt, s.T), std::move(s.data));
}

}  // namespace spde
