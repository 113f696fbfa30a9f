// SPDX-License-Identifier: Apache-2.0
//
// Controls psi(s, y) on the time-space lattice, the skeleton and controlled
// equations they drive, the quadratic rate functional and the log-density of
// the shifted noise.
#pragma once

#include "spde/mild_solver.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace spde {

/// psi is piecewise constant in time on [t_m, t_{m+1}) and lives on the cells of
/// the white increments (one value per interior node). Layout nt x (nx-1),
/// time-major.
class Control {
public:
    Control() = default;
    explicit Control(const GridSpec& grid);
    /// Throws Dimension on a size mismatch, InvalidArgument on non-finite
    /// entries and Domain if a radius N is given and sum psi^2 dt dx > N.
    Control(const GridSpec& grid, std::vector<double> values, std::optional<double> N = {});

    /// psi_m,j = fn(t_m, x_j).
    static Control from_function(const GridSpec& grid,
                                 const std::function<double(double, double)>& fn);

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& storage() const noexcept { return values_; }
    std::span<const double> at(std::size_t m) const {
        return {values_.data() + m * grid_.interior(), grid_.interior()};
    }
    /// sum psi^2 dt dx.
    double squared_norm() const noexcept { return squared_norm_; }
    std::optional<double> radius() const noexcept { return radius_; }
    bool is_zero() const noexcept;

private:
    GridSpec grid_{};
    std::vector<double> values_;
    double squared_norm_ = 0.0;
    std::optional<double> radius_;
};

double control_squared_norm(std::span<const double> values, const GridSpec& grid);

/// Values multiplying sigma in the dynamics: psi itself (standard coupling)
/// or the running space integral sum_{j' <= j} psi_j' dx (integrated).
std::vector<double> effective_control(const Control& psi, Coupling coupling);

PathSolution solve_skeleton(const Field& eta, const CoefficientSet& coeffs, const Control& psi,
                            const GridSpec& grid, const SolverConfig& config = {});

PathSolution solve_controlled(const Field& eta, const CoefficientSet& coeffs, const Control& psi,
                              double eps, const SeedDerivation& seed, const GridSpec& grid,
                              const SolverConfig& config = {});

/// Controlled solve with an explicit noise realization.
PathSolution solve_controlled_with_noise(const Field& eta, const CoefficientSet& coeffs,
                                         const Control& psi, double eps,
                                         const NoiseRealization& noise,
                                         const SolverConfig& config = {});

struct RateValue {
    double I = 0.0;
    std::optional<bool> admissible;  // set when a radius was supplied
};

/// I = 1/2 sum psi^2 dt dx; admissible = (sum psi^2 dt dx <= N).
RateValue rate_functional(const Control& psi, std::optional<double> N = {});

/// log dP/dQ of one realization for the shift W -> W + psi / sqrt(eps):
///   -(1/sqrt(eps)) sum psi dW - (1/(2 eps)) sum psi^2 dt dx
/// using the effective control of the chosen coupling. Throws for eps <= 0.
double girsanov_log_weight(const Control& psi, const NoiseRealization& noise, double eps,
                           Coupling coupling = Coupling::Standard);

/// sum_m sum_j psi_m,j dW_m,j.
double control_pairing(std::span<const double> psi, const NoiseRealization& noise);

void save_control(const std::string& path, const Control& psi);
Control load_control(const std::string& path);

}  // namespace spde
