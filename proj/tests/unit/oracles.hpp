// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations for the unit tests. Everything here is
// written from the defining formulas with plain loops and never calls into
// the transform or solver code under test.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

inline double phi(std::size_t k, double x) { return std::sqrt(2.0) * std::sin(k * pi * x); }

// Trapezoid over interior values with zero boundary.
inline double trapezoid(const std::vector<double>& v, double dx) {
    double s = 0.0;
    for (double x : v) s += x;
    return s * dx;
}

inline double sq_norm(const std::vector<double>& v, double dx) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s * dx;
}

// Mode coefficient by direct O(n) summation.
inline double mode_coefficient(const std::vector<double>& u, std::size_t k) {
    const std::size_t nx = u.size() + 1;
    const double dx = 1.0 / nx;
    double s = 0.0;
    for (std::size_t j = 1; j < nx; ++j) s += u[j - 1] * phi(k, j * dx);
    return s * dx;
}

// Method-of-images heat kernel with many images, written independently.
inline double heat_kernel(double t, double x, double y, int images = 8) {
    double s = 0.0;
    const double c = 1.0 / std::sqrt(4.0 * pi * t);
    for (int n = -images; n <= images; ++n) {
        const double a = x - y + 2.0 * n;
        const double b = x + y + 2.0 * n;
        s += std::exp(-a * a / (4.0 * t)) - std::exp(-b * b / (4.0 * t));
    }
    return c * s;
}

// Dense symmetric positive definite solve (Cholesky); used by the quadratic
// program oracle.
inline std::vector<double> cholesky_solve(std::vector<double> A, std::vector<double> b, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = A[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= A[j * n + k] * A[j * n + k];
        d = std::sqrt(d);
        A[j * n + j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = A[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= A[i * n + k] * A[j * n + k];
            A[i * n + j] = s / d;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= A[i * n + k] * b[k];
        b[i] = s / A[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[k * n + i] * b[k];
        b[i] = s / A[i * n + i];
    }
    return b;
}

// Minimum of 1/2 |psi|^2 dt dx subject to the time-discrete linear-additive
// dynamics reaching a * phi_k at T. In the sine basis the dynamics decouple:
// mode k of v_{m+1} = e^{-lambda dt} (v_m + dt psi_m). The constraint is on
// one mode only; other modes are zero at optimum. With c_m = e^{-lambda (nt-m) dt} dt
// the reachable amplitude is sum_m c_m p_m (p_m the mode-k control
// coefficient, whose cost is 1/2 sum p_m^2 dt). Solving the KKT system
// densely for the nt unknowns and the multiplier gives the exact discrete
// minimum.
inline double lq_discrete_action(std::size_t k, double a, double T, std::size_t nt, double start = 0.0) {
    const double lam = (k * pi) * (k * pi);
    const double dt = T / nt;
    // KKT: [dt I  -c; c^T 0] [p; nu] = [0; a - e^{-lam T} start]
    // Eliminate via the Schur complement: (c^T c / dt) nu = rhs, solved densely
    // through the normal matrix to stay independent of the closed form.
    const std::size_t n = nt;
    std::vector<double> c(n);
    for (std::size_t m = 0; m < n; ++m) c[m] = std::exp(-lam * (n - m) * dt) * dt;
    std::vector<double> H(n * n, 0.0);
    const double rho = 1e8;  // quadratic penalty, then refine by one Newton correction
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) H[i * n + j] = rho * c[i] * c[j] + (i == j ? dt : 0.0);
    }
    const double target = a - std::exp(-lam * T) * start;
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = rho * c[i] * target;
    std::vector<double> p = cholesky_solve(H, rhs, n);
    double reach = 0.0;
    for (std::size_t i = 0; i < n; ++i) reach += c[i] * p[i];
    // exact feasibility by scaling along the optimal direction
    for (double& v : p) v *= target / reach;
    double I = 0.0;
    for (double v : p) I += 0.5 * v * v * dt;
    return I;
}

// Continuous closed form lambda a^2 / (1 - e^{-2 lambda T}).
inline double lq_continuous_action(std::size_t k, double a, double T) {
    const double lam = (k * pi) * (k * pi);
    return lam * a * a / (1.0 - std::exp(-2.0 * lam * T));
}

}  // namespace oracle
