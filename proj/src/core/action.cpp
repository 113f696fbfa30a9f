// SPDX-License-Identifier: Apache-2.0
#include "spde/action.hpp"

#include "spde/error.hpp"
#include "spde/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spde {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
    return pairwise_sum(p);
}

class Problem {
public:
    Problem(const Field& target, const Field& eta, const CoefficientSet& coeffs,
            const GridSpec& grid, const SolverConfig& config)
        : target_(target), eta_(eta), stepper_(grid, coeffs, config), coupling_(config.coupling) {
        require(!config.R, ErrorCode::InvalidArgument,
                "the action solver does not differentiate the chi_R cutoff; unset R");
        require(target.nx() == grid.nx && eta.nx() == grid.nx, ErrorCode::Dimension,
                "target or initial datum does not match the grid");
        require(target.all_finite(), ErrorCode::InvalidArgument, "target has non-finite entries");
    }

    const GridSpec& grid() const { return stepper_.grid(); }

    ObjectiveValue evaluate(const Control& psi, double mu, bool with_gradient) const {
        const GridSpec& g = grid();
        require(psi.grid() == g, ErrorCode::Dimension, "control grid does not match the problem");
        const std::size_t n = g.interior();
        const std::vector<double> eff = effective_control(psi, coupling_);
        std::vector<double> states((g.nt + 1) * n);
        std::copy(eta_.values().begin(), eta_.values().end(), states.begin());
        for (std::size_t m = 0; m < g.nt; ++m) {
            StepInputs in;
            in.control = std::span<const double>(eff.data() + m * n, n);
            std::span<const double> u(states.data() + m * n, n);
            stepper_.step(m, u, u, in, std::span<double>(states.data() + (m + 1) * n, n));
        }

        ObjectiveValue out;
        std::vector<double> diff(n);
        const double* vT = states.data() + g.nt * n;
        for (std::size_t j = 0; j < n; ++j) diff[j] = vT[j] - target_[j];
        out.residual = std::sqrt(dot(diff, diff) * g.dx);
        out.action = 0.5 * psi.squared_norm();
        out.J = out.action + 0.5 * mu * out.residual * out.residual;
        if (!with_gradient) return out;

        const CoefficientSet& c = stepper_.coeffs();
        std::vector<double> p(n), q(n), next(n), geff(eff.size());
        for (std::size_t j = 0; j < n; ++j) p[j] = mu * g.dx * diff[j];
        for (std::size_t m = g.nt; m-- > 0;) {
            const double t = g.time(m);
            const double* v = states.data() + m * n;
            const double* e = eff.data() + m * n;
            q = p;
            stepper_.apply_semigroup(q);
            std::fill(next.begin(), next.end(), 0.0);
            if (c.has_g()) {
                stepper_.add_divergence_transpose(p, next);
                for (std::size_t j = 0; j < n; ++j) next[j] *= c.eval_dg(t, g.node(j + 1), v[j]);
            }
            for (std::size_t j = 0; j < n; ++j) {
                const double x = g.node(j + 1);
                double jac = 1.0;
                if (c.has_f()) jac += g.dt * c.eval_df(t, x, v[j]);
                if (e[j] != 0.0) jac += g.dt * c.eval_dsigma(t, x, v[j]) * e[j];
                geff[m * n + j] = g.dt * c.eval_sigma(t, x, v[j]) * q[j];
                next[j] += jac * q[j];
            }
            p.swap(next);
        }

        out.gradient.resize(eff.size());
        if (coupling_ == Coupling::Integrated) {
            // eff_j = sum_{j' <= j} psi_j' dx, so d/dpsi_j' = dx sum_{j >= j'} d/deff_j
            for (std::size_t m = 0; m < g.nt; ++m) {
                double acc = 0.0;
                for (std::size_t j = n; j-- > 0;) {
                    acc += geff[m * n + j];
                    out.gradient[m * n + j] = g.dx * acc;
                }
            }
        } else {
            out.gradient = std::move(geff);
        }
        const std::span<const double> s = psi.values();
        for (std::size_t i = 0; i < s.size(); ++i) out.gradient[i] += s[i] * g.dt * g.dx;
        return out;
    }

private:
    Field target_;
    Field eta_;
    MildStepper stepper_;
    Coupling coupling_;
};

}  // namespace

ObjectiveValue penalized_objective(const Field& target, const Field& eta,
                                   const CoefficientSet& coeffs, const Control& psi, double mu,
                                   bool with_gradient, const SolverConfig& config) {
    const Problem problem(target, eta, coeffs, psi.grid(), config);
    return problem.evaluate(psi, mu, with_gradient);
}

RateResult minimize_action(const Field& target, const Field& eta, const CoefficientSet& coeffs,
                           const GridSpec& grid, const ActionOptions& opts,
                           const SolverConfig& config) {
    require(opts.mu0 > 0.0 && opts.mu_growth > 1.0, ErrorCode::InvalidArgument,
            "penalty schedule needs mu0 > 0 and mu_growth > 1");
    require(opts.residual_tol > 0.0 && opts.grad_tol > 0.0 && opts.initial_step > 0.0,
            ErrorCode::InvalidArgument, "tolerances and step size must be > 0");
    require(opts.max_iter >= 1, ErrorCode::InvalidArgument, "max_iter must be >= 1");
    const Problem problem(target, eta, coeffs, grid, config);
    const double cell = grid.dt * grid.dx;

    Control psi = opts.initial ? *opts.initial : Control(grid);
    double mu = opts.mu0;
    ObjectiveValue cur = problem.evaluate(psi, mu, true);

    RateResult best;
    best.psi = psi;
    best.I = cur.action;
    best.residual = cur.residual;
    best.mu = mu;
    bool have_feasible = cur.residual <= opts.residual_tol;
    auto consider = [&](const Control& p, const ObjectiveValue& v, unsigned it) {
        const bool feasible = v.residual <= opts.residual_tol;
        const bool better = feasible ? (!have_feasible || v.action < best.I)
                                     : (!have_feasible && v.residual < best.residual);
        if (better) {
            best.psi = p;
            best.I = v.action;
            best.residual = v.residual;
            best.mu = mu;
            best.iterations = it;
        }
        have_feasible = have_feasible || feasible;
    };

    RateResult result;
    result.trace.push_back({0, mu, cur.J, cur.action, cur.residual, 0.0});

    std::vector<double> prev_psi, prev_grad;
    double step = opts.initial_step;
    double stall_best = cur.residual;
    unsigned stall = 0;
    unsigned it = 0;
    while (it < opts.max_iter) {
        // L2 gradient: Euclidean gradient divided by the cell measure.
        std::vector<double> G(cur.gradient.size());
        for (std::size_t i = 0; i < G.size(); ++i) G[i] = cur.gradient[i] / cell;
        const double gnorm = std::sqrt(dot(G, G) * cell);
        const double pnorm = std::sqrt(psi.squared_norm());
        const bool inner_done = gnorm <= opts.grad_tol * (1.0 + pnorm);
        if (inner_done && cur.residual <= opts.residual_tol) break;
        if (inner_done || stall >= opts.stall_window) {
            mu *= opts.mu_growth;
            cur = problem.evaluate(psi, mu, true);
            prev_psi.clear();
            stall = 0;
            stall_best = cur.residual;
            continue;
        }

        if (!prev_psi.empty()) {
            std::vector<double> s(G.size()), y(G.size());
            for (std::size_t i = 0; i < G.size(); ++i) {
                s[i] = psi.storage()[i] - prev_psi[i];
                y[i] = G[i] - prev_grad[i];
            }
            const double sy = dot(s, y);
            if (sy > 0.0) step = dot(s, s) / sy;
        }

        const double slope = dot(cur.gradient, G);  // directional decrease rate
        Control trial;
        ObjectiveValue tv;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> v(psi.storage());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= step * G[i];
            bool finite = true;
            for (double x : v) finite = finite && std::isfinite(x);
            if (finite) {
                trial = Control(grid, std::move(v));
                try {
                    tv = problem.evaluate(trial, mu, false);
                    if (tv.J <= cur.J - opts.armijo_c * step * slope) {
                        accepted = true;
                        break;
                    }
                } catch (const BlowUpError&) {
                }
            }
            step *= 0.5;
        }
        ++it;
        if (!accepted) {
            // No descent at machine precision: treat the inner problem as solved.
            mu *= opts.mu_growth;
            cur = problem.evaluate(psi, mu, true);
            prev_psi.clear();
            stall = 0;
            stall_best = cur.residual;
            continue;
        }
        prev_psi = psi.storage();
        prev_grad = std::move(G);
        psi = std::move(trial);
        cur = problem.evaluate(psi, mu, true);
        result.trace.push_back({it, mu, cur.J, cur.action, cur.residual, step});
        consider(psi, cur, it);
        if (cur.residual < stall_best * 0.99) {
            stall_best = cur.residual;
            stall = 0;
        } else if (cur.residual > opts.residual_tol) {
            ++stall;
        }
    }

    result.psi = std::move(best.psi);
    result.I = best.I;
    result.residual = best.residual;
    result.mu = best.mu;
    result.iterations = it;
    result.converged = have_feasible;
    return result;
}

PathRate path_rate_function(const std::vector<Field>& path, const CoefficientSet& coeffs,
                            const GridSpec& grid, double sigma_min, const SolverConfig& config) {
    require(path.size() == static_cast<std::size_t>(grid.nt) + 1, ErrorCode::Dimension,
            "path has " + std::to_string(path.size()) + " states, grid needs nt+1 = " +
                std::to_string(grid.nt + 1));
    for (const Field& f : path) {
        require(f.nx() == grid.nx && f.size() == grid.interior(), ErrorCode::Dimension,
                "path state does not match the grid");
    }
    require(sigma_min >= 0.0, ErrorCode::InvalidArgument, "sigma_min must be >= 0");
    const MildStepper stepper(grid, coeffs, config);
    const CoefficientSet& c = stepper.coeffs();
    const std::size_t n = grid.interior();
    std::vector<double> psi(static_cast<std::size_t>(grid.nt) * n), drift(n);

    for (std::size_t m = 0; m < grid.nt; ++m) {
        const double t = grid.time(m);
        const std::span<const double> v = path[m].values();
        for (std::size_t j = 0; j < n; ++j) {
            const double s = c.eval_sigma(t, grid.node(j + 1), v[j]);
            if (!(std::abs(s) >= sigma_min)) {
                fail(ErrorCode::Degenerate,
                     "sigma-degenerate: |sigma| = " + std::to_string(std::abs(s)) + " < sigma_min = " +
                         std::to_string(sigma_min) + " at t = " + std::to_string(t) +
                         ", x = " + std::to_string(grid.node(j + 1)));
            }
        }
        StepInputs in;
        stepper.step(m, v, v, in, drift);
        const std::span<const double> next = path[m + 1].values();
        double* out = psi.data() + m * n;
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = (next[j] - drift[j]) / (grid.dt * c.eval_sigma(t, grid.node(j + 1), v[j]));
        }
        if (config.coupling == Coupling::Integrated) {
            double prev = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double e = out[j];
                out[j] = (e - prev) / grid.dx;
                prev = e;
            }
        }
    }
    PathRate r;
    r.psi = Control(grid, std::move(psi));
    r.I = rate_functional(r.psi).I;
    return r;
}

double gradient_check(const Field& target, const Field& eta, const CoefficientSet& coeffs,
                      const Control& psi, const Control& direction, double h, double mu,
                      const SolverConfig& config) {
    require(h > 0.0 && std::isfinite(h), ErrorCode::InvalidArgument, "h must be > 0");
    require(!direction.is_zero(), ErrorCode::InvalidArgument, "gradient check direction is zero");
    require(direction.grid() == psi.grid(), ErrorCode::Dimension,
            "direction and control are on different grids");
    const Problem problem(target, eta, coeffs, psi.grid(), config);
    const ObjectiveValue at = problem.evaluate(psi, mu, true);
    const double analytic = dot(at.gradient, direction.values());
    std::vector<double> plus(psi.storage()), minus(psi.storage());
    for (std::size_t i = 0; i < plus.size(); ++i) {
        plus[i] += h * direction.storage()[i];
        minus[i] -= h * direction.storage()[i];
    }
    const double jp = problem.evaluate(Control(psi.grid(), std::move(plus)), mu, false).J;
    const double jm = problem.evaluate(Control(psi.grid(), std::move(minus)), mu, false).J;
    const double fd = (jp - jm) / (2.0 * h);
    return std::abs(analytic - fd) / std::max(std::abs(analytic), 1e-12);
}

}  // namespace spde
