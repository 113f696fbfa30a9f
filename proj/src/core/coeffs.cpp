// SPDX-License-Identifier: Apache-2.0
#include "spde/coeffs.hpp"

#include "spde/error.hpp"
#include "spde/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

namespace spde {

namespace {

constexpr double kDiffStep = 1e-6;

double central(const Coef3& fn, double t, double x, double r) {
    const double h = kDiffStep * (1.0 + std::abs(r));
    return (fn(t, x, r + h) - fn(t, x, r - h)) / (2.0 * h);
}

double param(const std::map<std::string, double>& p, const char* key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

void check_params(const std::string& family, const std::map<std::string, double>& params,
                  const std::set<std::string>& allowed) {
    for (const auto& [k, v] : params) {
        require(allowed.count(k) == 1, ErrorCode::InvalidArgument,
                "parameter '" + k + "' is not defined for family '" + family + "'");
        require(std::isfinite(v), ErrorCode::InvalidArgument,
                "parameter '" + k + "' must be finite");
    }
}

double floor1(double v) { return std::max(1.0, v); }

}  // namespace

double CoefficientSet::eval_df(double t, double x, double r) const {
    if (df) return df(t, x, r);
    return f ? central(f, t, x, r) : 0.0;
}

double CoefficientSet::eval_dg(double t, double x, double r) const {
    double d = 0.0;
    if (dg1) d += dg1(t, x, r);
    else if (g1) d += central(g1, t, x, r);
    if (dg2) d += dg2(t, r);
    else if (g2) {
        const double h = kDiffStep * (1.0 + std::abs(r));
        d += (g2(t, r + h) - g2(t, r - h)) / (2.0 * h);
    }
    return d;
}

double CoefficientSet::eval_dsigma(double t, double x, double r) const {
    if (dsigma) return dsigma(t, x, r);
    return sigma ? central(sigma, t, x, r) : 0.0;
}

const std::vector<std::string>& coefficient_families() {
    static const std::vector<std::string> names{"burgers", "linear", "reaction"};
    return names;
}

CoefficientSet make_coefficients(const std::string& family,
                                 const std::map<std::string, double>& params) {
    CoefficientSet c;
    c.family = family;
    c.params = params;
    c.rho = param(params, "rho", 8.0);

    if (family == "burgers") {
        check_params(family, params, {"b", "s0", "s1", "rho"});
        const double b = param(params, "b", 1.0);
        const double s0 = param(params, "s0", 1.0);
        const double s1 = param(params, "s1", 0.0);
        c.g2 = [b](double, double r) { return b * r * r; };
        c.dg2 = [b](double, double r) { return 2.0 * b * r; };
        c.sigma = [s0, s1](double, double, double r) { return s0 + s1 * r; };
        c.dsigma = [s1](double, double, double) { return s1; };
        c.K = floor1(std::max({std::abs(b), std::abs(s0), std::abs(s1)}));
        c.L = floor1(std::abs(b));
        c.L_sigma = floor1(std::abs(s1));
    } else if (family == "linear") {
        check_params(family, params, {"c", "s0", "rho"});
        const double k = param(params, "c", 0.0);
        const double s0 = param(params, "s0", 1.0);
        c.f = [k](double, double, double r) { return k * r; };
        c.df = [k](double, double, double) { return k; };
        c.sigma = [s0](double, double, double) { return s0; };
        c.dsigma = [](double, double, double) { return 0.0; };
        c.K = floor1(std::max(std::abs(k), std::abs(s0)));
        c.L = floor1(std::abs(k));
        c.L_sigma = 1.0;
    } else if (family == "reaction") {
        check_params(family, params, {"f0", "f1", "a0", "a1", "b", "s0", "s1", "rho"});
        const double f0 = param(params, "f0", 0.0);
        const double f1 = param(params, "f1", -1.0);
        const double a0 = param(params, "a0", 0.0);
        const double a1 = param(params, "a1", 0.0);
        const double b = param(params, "b", 0.5);
        const double s0 = param(params, "s0", 1.0);
        const double s1 = param(params, "s1", 0.0);
        c.f = [f0, f1](double, double, double r) { return f0 + f1 * r; };
        c.df = [f1](double, double, double) { return f1; };
        c.g1 = [a0, a1](double, double, double r) { return a0 + a1 * r; };
        c.dg1 = [a1](double, double, double) { return a1; };
        c.g2 = [b](double, double r) { return b * r * r; };
        c.dg2 = [b](double, double r) { return 2.0 * b * r; };
        c.sigma = [s0, s1](double, double, double r) { return s0 + s1 * r; };
        c.dsigma = [s1](double, double, double) { return s1; };
        c.K = floor1(std::max({std::abs(f0), std::abs(f1), std::abs(a0), std::abs(a1),
                               std::abs(b), std::abs(s0), std::abs(s1)}));
        c.L = floor1(std::abs(f1) + std::abs(a1) + std::abs(b));
        c.L_sigma = floor1(std::abs(s1));
    } else {
        std::string names;
        for (const auto& n : coefficient_families()) names += (names.empty() ? "" : ", ") + n;
        fail(ErrorCode::UnknownFamily,
             "unknown coefficient family '" + family + "' (valid: " + names + ")");
    }
    require(std::isfinite(c.rho) && c.rho >= 1.0, ErrorCode::InvalidArgument, "rho must be >= 1");
    c.out_of_theory = !(c.rho > 6.0);
    return c;
}

double chi_R(double r, double R) {
    require(R >= 0.0, ErrorCode::Domain, "chi_R requires R >= 0");
    const double s = std::abs(r) - R;
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    const double s3 = s * s * s;
    return 1.0 - s3 * (10.0 - 15.0 * s + 6.0 * s * s);
}

double chi_R_derivative(double r, double R) {
    require(R >= 0.0, ErrorCode::Domain, "chi_R requires R >= 0");
    const double s = std::abs(r) - R;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double d = -30.0 * s * s * (1.0 - s) * (1.0 - s);
    return r < 0.0 ? -d : d;
}

CoefficientSet truncate_coefficients(const CoefficientSet& set, unsigned n) {
    require(n >= 1, ErrorCode::InvalidArgument, "truncation level must be >= 1");
    CoefficientSet out = set;
    const double R = static_cast<double>(n);
    auto wrap3 = [R](const Coef3& fn) -> Coef3 {
        if (!fn) return {};
        return [fn, R](double t, double x, double r) {
            const double w = chi_R(r, R);
            return w == 0.0 ? 0.0 : fn(t, x, r) * w;
        };
    };
    auto wrap3d = [R](const Coef3& fn, const Coef3& dfn) -> Coef3 {
        if (!fn) return {};
        return [fn, dfn, R](double t, double x, double r) {
            const double w = chi_R(r, R);
            if (w == 0.0) return 0.0;
            const double d = dfn ? dfn(t, x, r) : central(fn, t, x, r);
            return d * w + fn(t, x, r) * chi_R_derivative(r, R);
        };
    };
    out.f = wrap3(set.f);
    out.df = wrap3d(set.f, set.df);
    out.g1 = wrap3(set.g1);
    out.dg1 = wrap3d(set.g1, set.dg1);
    out.sigma = wrap3(set.sigma);
    out.dsigma = wrap3d(set.sigma, set.dsigma);
    if (set.g2) {
        const Coef2 g2 = set.g2;
        const Coef2 dg2 = set.dg2;
        out.g2 = [g2, R](double t, double r) {
            const double w = chi_R(r, R);
            return w == 0.0 ? 0.0 : g2(t, r) * w;
        };
        out.dg2 = [g2, dg2, R](double t, double r) {
            const double w = chi_R(r, R);
            if (w == 0.0) return 0.0;
            double d;
            if (dg2) d = dg2(t, r);
            else {
                const double h = kDiffStep * (1.0 + std::abs(r));
                d = (g2(t, r + h) - g2(t, r - h)) / (2.0 * h);
            }
            return d * w + g2(t, r) * chi_R_derivative(r, R);
        };
    }
    out.L_sigma = set.L_sigma + chi_R_slope_bound * set.K * (R + 2.0);
    out.truncation_level = n;
    return out;
}

bool AssumptionReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const AssumptionCheck* AssumptionReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

AssumptionReport validate_assumptions(const CoefficientSet& set, const AssumptionBox& box,
                                      std::size_t n_samples) {
    require(box.t_max >= box.t_min && box.x_max >= box.x_min && box.r_max > box.r_min &&
                std::isfinite(box.r_min) && std::isfinite(box.r_max),
            ErrorCode::InvalidArgument, "empty assumption box");
    require(n_samples >= 1, ErrorCode::InvalidArgument, "n_samples must be >= 1");

    struct Pt {
        double t, x, r, q;
    };
    std::vector<Pt> pts;
    const CounterStream stream(SeedDerivation{0x5EED'A55E'17ULL, 0, 0}.key());
    auto lerp = [](double a, double b, double u) { return a + (b - a) * u; };
    for (std::size_t i = 0; i < n_samples; ++i) {
        const std::uint64_t c = 4 * i;
        pts.push_back({lerp(box.t_min, box.t_max, stream.uniform(c)),
                       lerp(box.x_min, box.x_max, stream.uniform(c + 1)),
                       lerp(box.r_min, box.r_max, stream.uniform(c + 2)),
                       lerp(box.r_min, box.r_max, stream.uniform(c + 3))});
    }
    for (double t : {box.t_min, box.t_max}) {
        for (double x : {box.x_min, box.x_max}) {
            pts.push_back({t, x, box.r_min, box.r_max});
            pts.push_back({t, x, box.r_max, box.r_min});
            pts.push_back({t, x, box.r_max, 0.5 * (box.r_min + box.r_max)});
        }
    }

    AssumptionReport report;
    auto check = [&](const std::string& name, auto&& ratio_fn, bool pair) {
        AssumptionCheck c;
        c.name = name;
        for (const auto& p : pts) {
            double ratio = ratio_fn(p);
            if (std::isnan(ratio)) ratio = std::numeric_limits<double>::infinity();
            if (ratio > c.worst_ratio) {
                c.worst_ratio = ratio;
                c.t = p.t;
                c.x = p.x;
                c.r = p.r;
                c.r2 = pair ? p.q : 0.0;
            }
        }
        c.passed = c.worst_ratio <= 1.0 + 1e-12;
        report.checks.push_back(c);
    };
    const double K = set.K;
    check("H2-growth-sigma", [&](const Pt& p) {
        return std::abs(set.eval_sigma(p.t, p.x, p.r)) / (K * (1.0 + std::abs(p.r)));
    }, false);
    check("H2-lipschitz-sigma", [&](const Pt& p) {
        if (p.r == p.q) return 0.0;
        return std::abs(set.eval_sigma(p.t, p.x, p.r) - set.eval_sigma(p.t, p.x, p.q)) /
               (set.L_sigma * std::abs(p.r - p.q));
    }, true);
    check("H3-local-lipschitz", [&](const Pt& p) {
        if (p.r == p.q) return 0.0;
        const double lhs = std::abs(set.eval_f(p.t, p.x, p.r) - set.eval_f(p.t, p.x, p.q)) +
                           std::abs(set.eval_g(p.t, p.x, p.r) - set.eval_g(p.t, p.x, p.q));
        return lhs / (set.L * (1.0 + std::abs(p.r) + std::abs(p.q)) * std::abs(p.r - p.q));
    }, true);
    check("H4-growth-g1", [&](const Pt& p) {
        return set.g1 ? std::abs(set.g1(p.t, p.x, p.r)) / (K * (1.0 + std::abs(p.r))) : 0.0;
    }, false);
    check("H4-growth-g2", [&](const Pt& p) {
        return set.g2 ? std::abs(set.g2(p.t, p.r)) / (K * (1.0 + p.r * p.r)) : 0.0;
    }, false);
    check("H5-growth-f", [&](const Pt& p) {
        return std::abs(set.eval_f(p.t, p.x, p.r)) / (K * (1.0 + std::abs(p.r)));
    }, false);

    report.rho_ok = set.rho > 6.0;
    if (!report.rho_ok) {
        report.warnings.push_back("H1: rho = " + std::to_string(set.rho) +
                                  " violates rho > 6 (run is out of theory)");
    }
    return report;
}

}  // namespace spde
