// SPDX-License-Identifier: Apache-2.0
#include "spde/lattice.hpp"

#include "spde/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

namespace spde {

namespace {

// The FFTW planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

GridSpec make_grid(std::uint32_t nx, std::uint32_t nt, double T) {
    require(nx >= 2, ErrorCode::Dimension,
            "dimension-too-small: nx must be >= 2, got " + std::to_string(nx));
    require(nt >= 1, ErrorCode::Dimension,
            "dimension-too-small: nt must be >= 1, got " + std::to_string(nt));
    require(std::isfinite(T) && T > 0.0, ErrorCode::Domain,
            "non-positive horizon: T must be > 0");
    GridSpec g;
    g.nx = nx;
    g.nt = nt;
    g.T = T;
    g.dx = 1.0 / static_cast<double>(nx);
    g.dt = T / static_cast<double>(nt);
    require(g.dx * static_cast<double>(nx) == 1.0, ErrorCode::Dimension,
            "nx = " + std::to_string(nx) + " does not satisfy dx*nx == 1 in binary64");
    return g;
}

Field::Field(std::uint32_t nx, std::vector<double> values) : nx_(nx), values_(std::move(values)) {
    require(nx >= 2 && values_.size() == nx - 1, ErrorCode::Dimension,
            "field length " + std::to_string(values_.size()) + " does not match nx-1 = " +
                std::to_string(nx >= 1 ? nx - 1 : 0));
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

namespace basis {

double eigenfunction(std::size_t k, double x) noexcept {
    return std::numbers::sqrt2 * std::sin(static_cast<double>(k) * pi * x);
}

double eigenfunction_derivative(std::size_t k, double x) noexcept {
    const double kp = static_cast<double>(k) * pi;
    return std::numbers::sqrt2 * kp * std::cos(kp * x);
}

double antiderivative(std::size_t k, double x) noexcept {
    const double kp = static_cast<double>(k) * pi;
    return std::numbers::sqrt2 * (1.0 - std::cos(kp * x)) / kp;
}

}  // namespace basis

struct SpectralBasis::Plans {
    fftw_plan sine = nullptr;    // RODFT00, size nx-1
    fftw_plan cosine = nullptr;  // REDFT00, size nx+1
};

SpectralBasis::SpectralBasis(std::uint32_t nx) : nx_(nx), plans_(std::make_unique<Plans>()) {
    require(nx >= 2, ErrorCode::Dimension, "spectral basis needs nx >= 2");
    const int n_sine = static_cast<int>(nx) - 1;
    const int n_cos = static_cast<int>(nx) + 1;
    std::vector<double> a(nx + 1), b(nx + 1);
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->sine = fftw_plan_r2r_1d(n_sine, a.data(), b.data(), FFTW_RODFT00, flags);
    plans_->cosine = fftw_plan_r2r_1d(n_cos, a.data(), b.data(), FFTW_REDFT00, flags);
    require(plans_->sine && plans_->cosine, ErrorCode::Internal, "FFTW planning failed");
}

SpectralBasis::~SpectralBasis() {
    std::lock_guard lock(planner_mutex());
    if (plans_->sine) fftw_destroy_plan(plans_->sine);
    if (plans_->cosine) fftw_destroy_plan(plans_->cosine);
}

std::shared_ptr<const SpectralBasis> SpectralBasis::get(std::uint32_t nx) {
    static std::mutex cache_mutex;
    static std::map<std::uint32_t, std::shared_ptr<const SpectralBasis>> cache;
    std::lock_guard lock(cache_mutex);
    auto it = cache.find(nx);
    if (it != cache.end()) return it->second;
    auto b = std::make_shared<const SpectralBasis>(nx);
    cache.emplace(nx, b);
    return b;
}

// RODFT00: Y_k = 2 sum_j X_j sin(pi (j+1)(k+1) / nx). With u_hat_k = sqrt2 dx sum_j
// u_j sin(pi k j / nx), forward = (sqrt2 dx / 2) Y and inverse = (sqrt2 / 2) Y.
void SpectralBasis::forward(std::span<const double> field, std::span<double> coeffs) const {
    require(field.size() == modes() && coeffs.size() == modes(), ErrorCode::Dimension,
            "sine transform length mismatch");
    // new-array execute is out-of-place per the plan; the input is not modified
    // by RODFT00 out-of-place transforms.
    if (field.data() == coeffs.data()) {
        std::vector<double> tmp(field.begin(), field.end());
        fftw_execute_r2r(plans_->sine, tmp.data(), coeffs.data());
    } else {
        fftw_execute_r2r(plans_->sine, const_cast<double*>(field.data()), coeffs.data());
    }
    const double scale = std::numbers::sqrt2 * 0.5 / static_cast<double>(nx_);
    for (double& c : coeffs) c *= scale;
}

void SpectralBasis::inverse(std::span<const double> coeffs, std::span<double> field) const {
    require(field.size() == modes() && coeffs.size() == modes(), ErrorCode::Dimension,
            "inverse sine transform length mismatch");
    if (field.data() == coeffs.data()) {
        std::vector<double> tmp(coeffs.begin(), coeffs.end());
        fftw_execute_r2r(plans_->sine, tmp.data(), field.data());
    } else {
        fftw_execute_r2r(plans_->sine, const_cast<double*>(coeffs.data()), field.data());
    }
    const double scale = std::numbers::sqrt2 * 0.5;
    for (double& v : field) v *= scale;
}

// REDFT00 (size nx+1): Y_k = X_0 + (-1)^k X_nx + 2 sum_{j=1}^{nx-1} X_j cos(pi j k / nx),
// i.e. twice the trapezoid sum of cos(k pi x) w(x) / dx.
void SpectralBasis::derivative_pairing(std::span<const double> nodal,
                                       std::span<double> coeffs) const {
    require(nodal.size() == static_cast<std::size_t>(nx_) + 1 && coeffs.size() == modes(),
            ErrorCode::Dimension, "derivative pairing length mismatch");
    std::vector<double> in(nodal.begin(), nodal.end());
    std::vector<double> out(nx_ + 1);
    fftw_execute_r2r(plans_->cosine, in.data(), out.data());
    const double dx = 1.0 / static_cast<double>(nx_);
    for (std::size_t k = 1; k < nx_; ++k) {
        coeffs[k - 1] = std::numbers::sqrt2 * static_cast<double>(k) * basis::pi * dx * 0.5 * out[k];
    }
}

void SpectralBasis::derivative_pairing_transpose(std::span<const double> coeffs,
                                                 std::span<double> field) const {
    require(field.size() == modes() && coeffs.size() == modes(), ErrorCode::Dimension,
            "derivative pairing transpose length mismatch");
    const double dx = 1.0 / static_cast<double>(nx_);
    std::vector<double> in(nx_ + 1, 0.0);
    std::vector<double> out(nx_ + 1);
    for (std::size_t k = 1; k < nx_; ++k) {
        in[k] = std::numbers::sqrt2 * static_cast<double>(k) * basis::pi * dx * coeffs[k - 1];
    }
    fftw_execute_r2r(plans_->cosine, in.data(), out.data());
    for (std::size_t j = 1; j < nx_; ++j) field[j - 1] = 0.5 * out[j];
}

std::vector<double> sine_transform(const Field& field) {
    require(field.nx() >= 2 && field.size() == field.nx() - 1, ErrorCode::Dimension,
            "field length does not match its grid");
    std::vector<double> coeffs(field.size());
    SpectralBasis::get(field.nx())->forward(field.values(), coeffs);
    return coeffs;
}

Field inverse_sine_transform(std::uint32_t nx, std::span<const double> coeffs) {
    require(nx >= 2 && coeffs.size() == nx - 1, ErrorCode::Dimension,
            "coefficient length does not match nx-1");
    Field out(nx);
    SpectralBasis::get(nx)->inverse(coeffs, out.values());
    return out;
}

double lp_norm(std::span<const double> values, double dx, double p) {
    require(p >= 1.0, ErrorCode::Domain, "lp_norm requires p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    if (p == 2.0) {
        for (double v : values) s += v * v;
        return std::sqrt(s * dx);
    }
    for (double v : values) s += std::pow(std::abs(v), p);
    return std::pow(s * dx, 1.0 / p);
}

double lp_norm(const Field& field, double p) {
    return lp_norm(field.values(), 1.0 / static_cast<double>(field.nx()), p);
}

double inner(const Field& a, const Field& b) {
    require(a.nx() == b.nx(), ErrorCode::Dimension, "inner product of fields on different grids");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s / static_cast<double>(a.nx());
}

}  // namespace spde
