// SPDX-License-Identifier: Apache-2.0
#include "spde/greenfn.hpp"

#include "spde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spde {

namespace {

void check_time(double t) {
    require(std::isfinite(t) && t > 0.0, ErrorCode::Domain,
            "kernel requires t > 0, got " + std::to_string(t));
}

void check_images(int n) {
    require(n >= 0, ErrorCode::InvalidArgument, "n_images must be >= 0");
}

}  // namespace

double green_image(double t, double x, double y, int n_images) {
    check_time(t);
    check_images(n_images);
    const double inv4t = 1.0 / (4.0 * t);
    double s = 0.0;
    for (int n = -n_images; n <= n_images; ++n) {
        const double z1 = y - x - 2.0 * n;
        const double z2 = y + x - 2.0 * n;
        s += std::exp(-z1 * z1 * inv4t) - std::exp(-z2 * z2 * inv4t);
    }
    return s / std::sqrt(4.0 * basis::pi * t);
}

double green_image_dy(double t, double x, double y, int n_images) {
    check_time(t);
    check_images(n_images);
    const double inv4t = 1.0 / (4.0 * t);
    const double inv2t = 1.0 / (2.0 * t);
    double s = 0.0;
    for (int n = -n_images; n <= n_images; ++n) {
        const double z1 = y - x - 2.0 * n;
        const double z2 = y + x - 2.0 * n;
        s += -z1 * inv2t * std::exp(-z1 * z1 * inv4t) + z2 * inv2t * std::exp(-z2 * z2 * inv4t);
    }
    return s / std::sqrt(4.0 * basis::pi * t);
}

double green_image_dxdy(double t, double x, double y, int n_images) {
    check_time(t);
    check_images(n_images);
    const double inv4t = 1.0 / (4.0 * t);
    const double inv2t = 1.0 / (2.0 * t);
    double s = 0.0;
    for (int n = -n_images; n <= n_images; ++n) {
        const double z1 = y - x - 2.0 * n;
        const double z2 = y + x - 2.0 * n;
        const double e1 = std::exp(-z1 * z1 * inv4t);
        const double e2 = std::exp(-z2 * z2 * inv4t);
        s += (inv2t - z1 * z1 * inv2t * inv2t) * e1 - (-inv2t + z2 * z2 * inv2t * inv2t) * e2;
    }
    return s / std::sqrt(4.0 * basis::pi * t);
}

double green_spectral(double t, double x, double y, std::size_t modes) {
    check_time(t);
    require(modes >= 1, ErrorCode::InvalidArgument, "green_spectral needs K_modes >= 1");
    double s = 0.0;
    for (std::size_t k = 1; k <= modes; ++k) {
        const double decay = std::exp(-basis::eigenvalue(k) * t);
        if (decay == 0.0) break;
        s += decay * basis::eigenfunction(k, x) * basis::eigenfunction(k, y);
    }
    return s;
}

double green(double t, double x, double y) {
    return t < 0.1 ? green_image(t, x, y, 5) : green_spectral(t, x, y, 128);
}

Field apply_semigroup(const Field& u, double tau) {
    require(std::isfinite(tau) && tau >= 0.0, ErrorCode::Domain, "semigroup requires tau >= 0");
    if (tau == 0.0) return u;
    const auto sb = SpectralBasis::get(u.nx());
    std::vector<double> c(u.size());
    sb->forward(u.values(), c);
    for (std::size_t k = 1; k <= c.size(); ++k) c[k - 1] *= std::exp(-sb->eigenvalue(k) * tau);
    Field out(u.nx());
    sb->inverse(c, out.values());
    return out;
}

Field apply_divergence_smoothing(std::span<const double> nodal, std::uint32_t nx, double tau) {
    require(std::isfinite(tau) && tau > 0.0, ErrorCode::Domain,
            "divergence smoothing requires tau > 0");
    require(nx >= 2 && nodal.size() == static_cast<std::size_t>(nx) + 1, ErrorCode::Dimension,
            "divergence smoothing expects nx+1 nodal values");
    const auto sb = SpectralBasis::get(nx);
    std::vector<double> c(sb->modes());
    sb->derivative_pairing(nodal, c);
    for (std::size_t k = 1; k <= c.size(); ++k) c[k - 1] *= std::exp(-sb->eigenvalue(k) * tau);
    Field out(nx);
    sb->inverse(c, out.values());
    return out;
}

Field divergence_convolution(const std::vector<std::vector<double>>& v, std::uint32_t nx,
                             double dt) {
    require(!v.empty(), ErrorCode::InvalidArgument, "divergence convolution needs >= 1 slice");
    require(std::isfinite(dt) && dt > 0.0, ErrorCode::Domain, "dt must be > 0");
    const auto sb = SpectralBasis::get(nx);
    const std::size_t K = sb->modes();
    const std::size_t M = v.size();
    std::vector<double> acc(K, 0.0), c(K);
    for (std::size_t m = 0; m < M; ++m) {
        sb->derivative_pairing(v[m], c);
        // int_{t_m}^{t_{m+1}} e^{-lambda (t_M - r)} dr
        const double lag_end = static_cast<double>(M - m - 1) * dt;
        for (std::size_t k = 1; k <= K; ++k) {
            const double lam = sb->eigenvalue(k);
            const double w = std::exp(-lam * lag_end) * (-std::expm1(-lam * dt)) / lam;
            acc[k - 1] += w * c[k - 1];
        }
    }
    Field out(nx);
    sb->inverse(acc, out.values());
    return out;
}

void SmoothingParams::validate() const {
    const double k = kappa();
    require(q >= 1.0 && q < rho, ErrorCode::InvalidArgument, "smoothing params need 1 <= q < rho");
    require(gamma > 2.0 / k, ErrorCode::InvalidArgument, "smoothing params need gamma > 2/kappa");
    require(alpha > 0.0 && alpha < 0.5 * k, ErrorCode::InvalidArgument,
            "smoothing params need 0 < alpha < kappa/2");
    require(beta > 0.0 && beta < k, ErrorCode::InvalidArgument,
            "smoothing params need 0 < beta < kappa");
}

std::vector<KernelSample> kernel_sample_grid(double t_min, double t_max, std::size_t nt,
                                             std::size_t nx, std::size_t ny) {
    require(t_min > 0.0 && t_max >= t_min, ErrorCode::Domain, "sample times must be > 0");
    require(nt >= 1 && nx >= 1 && ny >= 1, ErrorCode::InvalidArgument, "empty sample grid");
    std::vector<KernelSample> out;
    out.reserve(nt * nx * ny);
    for (std::size_t i = 0; i < nt; ++i) {
        const double f = nt == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(nt - 1);
        const double t = t_min * std::pow(t_max / t_min, f);
        for (std::size_t a = 0; a < nx; ++a) {
            const double x = nx == 1 ? 0.5 : static_cast<double>(a) / static_cast<double>(nx - 1);
            for (std::size_t b = 0; b < ny; ++b) {
                const double y = ny == 1 ? 0.5 : static_cast<double>(b) / static_cast<double>(ny - 1);
                out.push_back({t, x, y});
            }
        }
    }
    return out;
}

KernelBoundReport verify_kernel_bounds(std::span<const KernelSample> samples,
                                       const KernelBoundParams& params) {
    require(!samples.empty(), ErrorCode::InvalidArgument, "empty kernel sample set");
    for (const auto& s : samples) {
        require(std::isfinite(s.t) && s.t > 0.0, ErrorCode::Domain,
                "kernel sample set contains t <= 0");
    }
    require(params.K1 > 0.0, ErrorCode::InvalidArgument, "K1 must be positive");
    KernelBoundReport report;
    const std::array<double, 3> exps{params.a, params.b, params.c};
    const std::array<double, 3> powers{0.5, 1.0, 1.5};
    for (std::size_t e = 0; e < 3; ++e) {
        auto& est = report.estimates[e];
        est.worst_ratio = 0.0;
        est.worst = samples.front();
        for (const auto& s : samples) {
            double kernel = 0.0;
            switch (e) {
                case 0: kernel = green_image(s.t, s.x, s.y, params.n_images); break;
                case 1: kernel = green_image_dy(s.t, s.x, s.y, params.n_images); break;
                default: kernel = green_image_dxdy(s.t, s.x, s.y, params.n_images); break;
            }
            const double d = s.x - s.y;
            // comparison in log space
            const double log_bound = std::log(params.K1) - powers[e] * std::log(s.t) -
                                     exps[e] * d * d / s.t;
            const double a = std::abs(kernel);
            const double ratio = a == 0.0 ? 0.0 : std::exp(std::log(a) - log_bound);
            if (ratio > est.worst_ratio) {
                est.worst_ratio = ratio;
                est.worst = s;
            }
        }
        est.holds = est.worst_ratio <= 1.0;
        est.fitted_K1 = est.worst_ratio * params.K1;
    }
    return report;
}

namespace {

double nodal_lq(std::span<const double> nodal, double q) {
    const std::size_t n = nodal.size() - 1;
    const double dx = 1.0 / static_cast<double>(n);
    double s = 0.5 * (std::pow(std::abs(nodal.front()), q) + std::pow(std::abs(nodal.back()), q));
    for (std::size_t j = 1; j < n; ++j) s += std::pow(std::abs(nodal[j]), q);
    return std::pow(s * dx, 1.0 / q);
}

}  // namespace

double fit_smoothing_constant(std::span<const SmoothingProbe> battery, std::uint32_t nx,
                              std::uint32_t steps, const SmoothingParams& params) {
    params.validate();
    require(!battery.empty(), ErrorCode::InvalidArgument, "empty smoothing battery");
    require(steps >= 1, ErrorCode::InvalidArgument, "steps must be >= 1");
    const double k = params.kappa();
    double C = 0.0;
    for (const auto& probe : battery) {
        require(probe.t > 0.0, ErrorCode::Domain, "probe time must be > 0");
        require(probe.nodal.size() == static_cast<std::size_t>(nx) + 1, ErrorCode::Dimension,
                "probe length must be nx+1");
        const double vq = nodal_lq(probe.nodal, params.q);
        if (vq == 0.0) continue;
        std::vector<std::vector<double>> v(steps, probe.nodal);
        const Field j = divergence_convolution(v, nx, probe.t / static_cast<double>(steps));
        const double lhs = lp_norm(j, params.rho);
        // (int_0^t ||v||_q^gamma)^(1/gamma) = t^(1/gamma) ||v||_q for time-constant v
        const double rhs = std::pow(probe.t, 0.5 * k - 1.0 / params.gamma) *
                           std::pow(probe.t, 1.0 / params.gamma) * vq;
        C = std::max(C, lhs / rhs);
    }
    return C;
}

}  // namespace spde
