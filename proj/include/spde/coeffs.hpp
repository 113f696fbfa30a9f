// SPDX-License-Identifier: Apache-2.0
//
// Coefficient triples (f, g = g1 + g2, sigma) of the semilinear equation,
// their truncations, the smooth cutoff, and sampled assumption checks.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spde {

using Coef3 = std::function<double(double t, double x, double r)>;
using Coef2 = std::function<double(double t, double r)>;

/// Immutable after construction. Evaluators must be pure; they are called
/// concurrently from Monte Carlo workers. Derivatives in r are needed by the
/// adjoint solver; when absent a central difference is used instead.
struct CoefficientSet {
    std::string family;  // "burgers", "linear", "reaction" or "custom"
    std::map<std::string, double> params;

    Coef3 f, g1, sigma;
    Coef2 g2;
    Coef3 df, dg1, dsigma;  // d/dr, optional
    Coef2 dg2;

    double K = 1.0;        // linear growth constant of sigma, g1, f (quadratic for g2)
    double L = 1.0;        // local Lipschitz constant of f + g, weighted by 1 + |r| + |s|
    double L_sigma = 1.0;  // global Lipschitz constant of sigma
    double rho = 8.0;
    bool out_of_theory = false;  // set to run with rho <= 6
    std::optional<unsigned> truncation_level;

    double eval_f(double t, double x, double r) const { return f ? f(t, x, r) : 0.0; }
    double eval_g(double t, double x, double r) const {
        return (g1 ? g1(t, x, r) : 0.0) + (g2 ? g2(t, r) : 0.0);
    }
    double eval_sigma(double t, double x, double r) const { return sigma ? sigma(t, x, r) : 0.0; }
    double eval_df(double t, double x, double r) const;
    double eval_dg(double t, double x, double r) const;
    double eval_dsigma(double t, double x, double r) const;

    bool has_f() const noexcept { return static_cast<bool>(f); }
    bool has_g() const noexcept { return g1 || g2; }
};

/// Builtin families:
///   burgers:  f = 0, g1 = 0, g2 = b r^2, sigma = s0 + s1 r     (b=1, s0=1, s1=0)
///   linear:   f = c r, g = 0, sigma = s0                        (c=0, s0=1)
///   reaction: f = f0 + f1 r, g1 = a0 + a1 r, g2 = b r^2, sigma = s0 + s1 r
/// Optional parameter "rho" (default 8). Unknown keys and non-finite values
/// are rejected.
CoefficientSet make_coefficients(const std::string& family,
                                 const std::map<std::string, double>& params = {});

/// Names of the builtin families.
const std::vector<std::string>& coefficient_families();

/// Quintic smoothstep cutoff: 1 on |r| <= R, 0 on |r| >= R+1.
double chi_R(double r, double R);
/// d/dr chi_R(r).
double chi_R_derivative(double r, double R);
/// Peak |chi_R'| (15/8).
inline constexpr double chi_R_slope_bound = 1.875;

/// f_n, g_n, sigma_n: equal to the originals on |r| <= n, zero on |r| >= n+1,
/// bridged by chi_n(|r|). Reported L_sigma is the global Lipschitz constant of
/// sigma_n, L_sigma + 1.875 K (n + 2).
CoefficientSet truncate_coefficients(const CoefficientSet& set, unsigned n);

struct AssumptionBox {
    double t_min = 0.0, t_max = 1.0;
    double x_min = 0.0, x_max = 1.0;
    double r_min = -10.0, r_max = 10.0;
};

struct AssumptionCheck {
    std::string name;    // e.g. "H2-growth-sigma"
    bool passed = true;
    double worst_ratio = 0.0;  // max of lhs / rhs over samples
    double t = 0.0, x = 0.0, r = 0.0, r2 = 0.0;  // witness (r2 only for pair checks)
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool rho_ok = true;  // rho > 6
    std::vector<std::string> warnings;

    bool all_passed() const;
    const AssumptionCheck* find(const std::string& name) const;
};

/// Sampled growth and Lipschitz checks on a box; n_samples points (and as many pairs)
/// drawn from a fixed counter stream plus the box corners.
AssumptionReport validate_assumptions(const CoefficientSet& set, const AssumptionBox& box,
                                      std::size_t n_samples);

}  // namespace spde
