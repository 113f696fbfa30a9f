// SPDX-License-Identifier: Apache-2.0
//
// Uniform time-space lattice on [0,T]x[0,1] with Dirichlet boundary, the
// orthonormal sine basis that diagonalizes the discrete heat flow, and
// trapezoid quadrature with boundary values pinned at zero.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace spde {

struct GridSpec {
    std::uint32_t nx = 0;  // spatial intervals; interior nodes x_j = j/nx, j = 1..nx-1
    std::uint32_t nt = 0;  // time steps
    double T = 0.0;
    double dx = 0.0;
    double dt = 0.0;

    std::size_t interior() const noexcept { return nx - 1; }
    double node(std::size_t j) const noexcept { return static_cast<double>(j) * dx; }
    double time(std::size_t m) const noexcept { return static_cast<double>(m) * dt; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Validates (nx >= 2, nt >= 1, T > 0, dx*nx == 1 in binary64) and derives dx, dt.
GridSpec make_grid(std::uint32_t nx, std::uint32_t nt, double T);

/// Spatial profile at the interior nodes; boundary values are implicitly 0.
class Field {
public:
    Field() = default;
    explicit Field(std::uint32_t nx) : nx_(nx), values_(nx >= 1 ? nx - 1 : 0, 0.0) {}
    Field(std::uint32_t nx, std::vector<double> values);

    std::uint32_t nx() const noexcept { return nx_; }
    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::vector<double>& storage() noexcept { return values_; }
    const std::vector<double>& storage() const noexcept { return values_; }

    bool all_finite() const noexcept;

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::uint32_t nx_ = 0;
    std::vector<double> values_;
};

namespace basis {

constexpr double pi = std::numbers::pi;

inline double eigenvalue(std::size_t k) noexcept {
    const double kp = static_cast<double>(k) * pi;
    return kp * kp;
}

/// phi_k(x) = sqrt(2) sin(k pi x); also the noise basis.
double eigenfunction(std::size_t k, double x) noexcept;

/// d/dx phi_k(x) = sqrt(2) k pi cos(k pi x).
double eigenfunction_derivative(std::size_t k, double x) noexcept;

/// h_k(x) = int_0^x phi_k = sqrt(2) (1 - cos(k pi x)) / (k pi).
double antiderivative(std::size_t k, double x) noexcept;

}  // namespace basis

/// Samples f at the interior nodes of a grid with nx intervals.
template <class F>
Field sample_field(std::uint32_t nx, F&& f) {
    Field out(nx);
    const double dx = 1.0 / static_cast<double>(nx);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(static_cast<double>(j + 1) * dx);
    return out;
}

/// Discrete sine/cosine transforms for a fixed nx. Mode k (1-based) is stored
/// at index k-1; modes 1..nx-1 are resolved. Transforms are orthonormal with
/// respect to the trapezoid inner product, so forward followed by inverse is
/// the identity and Parseval holds.
///
/// Instances are immutable and safe to share between threads.
class SpectralBasis {
public:
    explicit SpectralBasis(std::uint32_t nx);
    ~SpectralBasis();
    SpectralBasis(const SpectralBasis&) = delete;
    SpectralBasis& operator=(const SpectralBasis&) = delete;

    /// Shared instance per nx.
    static std::shared_ptr<const SpectralBasis> get(std::uint32_t nx);

    std::uint32_t nx() const noexcept { return nx_; }
    std::size_t modes() const noexcept { return nx_ - 1; }
    double eigenvalue(std::size_t k) const noexcept { return basis::eigenvalue(k); }

    /// u_hat_k = sum_j u_j phi_k(x_j) dx.
    void forward(std::span<const double> field, std::span<double> coeffs) const;
    /// u_j = sum_k u_hat_k phi_k(x_j).
    void inverse(std::span<const double> coeffs, std::span<double> field) const;

    /// <phi_k', w> by trapezoid over all nx+1 nodes (w includes boundary values).
    void derivative_pairing(std::span<const double> nodal, std::span<double> coeffs) const;
    /// Transpose of derivative_pairing restricted to interior columns:
    /// out_j = sum_k phi_k'(x_j) dx c_k, j = 1..nx-1.
    void derivative_pairing_transpose(std::span<const double> coeffs,
                                      std::span<double> field) const;

private:
    struct Plans;
    std::uint32_t nx_;
    std::unique_ptr<Plans> plans_;
};

std::vector<double> sine_transform(const Field& field);
Field inverse_sine_transform(std::uint32_t nx, std::span<const double> coeffs);

/// Composite trapezoid approximation of (int_0^1 |u|^p)^(1/p) with zero
/// boundary values; p = +inf returns max |u_j|.
double lp_norm(const Field& field, double p);
double lp_norm(std::span<const double> values, double dx, double p);

/// Trapezoid inner product with zero boundary values.
double inner(const Field& a, const Field& b);

}  // namespace spde
