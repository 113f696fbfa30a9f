// SPDX-License-Identifier: Apache-2.0
//
// Minimum action: inf 1/2 |psi|^2 over controls whose skeleton path ends at a
// target, computed by penalized adjoint descent on the discrete dynamics, and
// the rate of a full path by inverting the discrete skeleton step.
#pragma once

#include "spde/control.hpp"

#include <optional>
#include <vector>

namespace spde {

struct ActionOptions {
    double mu0 = 10.0;
    double mu_growth = 2.0;
    unsigned stall_window = 25;    // iterations without residual progress before mu grows
    double residual_tol = 1e-3;    // on ||v(T) - target||_2
    double grad_tol = 1e-6;        // inner stop: ||grad||_L2 <= grad_tol * (1 + ||psi||_L2)
    double initial_step = 1.0;
    double armijo_c = 1e-4;
    unsigned max_iter = 20000;
    std::optional<Control> initial;
};

struct ActionIterate {
    unsigned iteration = 0;
    double mu = 0.0;
    double objective = 0.0;  // penalized objective at this mu
    double action = 0.0;
    double residual = 0.0;
    double step = 0.0;
};

struct RateResult {
    Control psi;
    double I = 0.0;
    double residual = 0.0;
    double mu = 0.0;
    unsigned iterations = 0;
    bool converged = false;
    std::vector<ActionIterate> trace;
};

/// Terminal-constrained minimum action by penalty continuation: minimizes
/// 1/2 sum psi^2 + (mu/2) ||v(T) - target||_2^2 with Barzilai-Borwein steps
/// safeguarded by Armijo backtracking, doubling mu when the residual stalls or
/// the inner problem is solved while the residual is above tolerance. Returns
/// the best feasible iterate (least action with residual <= tol), or the least
/// residual one with converged = false.
RateResult minimize_action(const Field& target, const Field& eta, const CoefficientSet& coeffs,
                           const GridSpec& grid, const ActionOptions& opts = {},
                           const SolverConfig& config = {});

/// Value and Euclidean gradient (with respect to the stored psi values) of the
/// penalized objective.
struct ObjectiveValue {
    double J = 0.0;
    double action = 0.0;
    double residual = 0.0;
    std::vector<double> gradient;
};

ObjectiveValue penalized_objective(const Field& target, const Field& eta,
                                   const CoefficientSet& coeffs, const Control& psi, double mu,
                                   bool with_gradient, const SolverConfig& config = {});

struct PathRate {
    double I = 0.0;
    Control psi;
};

/// Rate of a full path: psi_m = [v_{m+1} - P S(v_m + dt f_m) - P D g_m] / (dt sigma_m)
/// at the interior nodes. Throws Degenerate if |sigma| < sigma_min anywhere
/// on the path, Dimension if the path does not match the grid.
PathRate path_rate_function(const std::vector<Field>& path, const CoefficientSet& coeffs,
                            const GridSpec& grid, double sigma_min = 1e-8,
                            const SolverConfig& config = {});

/// |<grad J, d> - (J(psi + h d) - J(psi - h d)) / (2h)| / max(|<grad J, d>|, 1e-12)
/// for the penalized objective with weight mu.
double gradient_check(const Field& target, const Field& eta, const CoefficientSet& coeffs,
                      const Control& psi, const Control& direction, double h, double mu = 10.0,
                      const SolverConfig& config = {});

}  // namespace spde
