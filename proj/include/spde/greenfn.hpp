// SPDX-License-Identifier: Apache-2.0
//
// Dirichlet heat kernel on [0,1]: method-of-images and eigenfunction forms,
// the heat semigroup, the divergence-form smoothing operator, and sampled
// verification of the Gaussian kernel bounds.
#pragma once

#include "spde/lattice.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace spde {

/// Partial image sum over |n| <= n_images. Requires t > 0.
double green_image(double t, double x, double y, int n_images);
/// d/dy of the image sum.
double green_image_dy(double t, double x, double y, int n_images);
/// d^2/dxdy of the image sum.
double green_image_dxdy(double t, double x, double y, int n_images);

/// sum_{k <= K} exp(-k^2 pi^2 t) phi_k(x) phi_k(y). Requires t > 0, K >= 1.
double green_spectral(double t, double x, double y, std::size_t modes);

/// Regime switch: image form (n = 5) below t = 0.1, spectral (K = 128) above.
double green(double t, double x, double y);

/// Per-mode multiplication by exp(-lambda_k tau); tau = 0 is the identity.
Field apply_semigroup(const Field& u, double tau);

/// x -> int_0^1 d_y G_tau(x,y) w(y) dy. `nodal` holds w at all nx+1 nodes
/// (boundary values included). Requires tau > 0.
Field apply_divergence_smoothing(std::span<const double> nodal, std::uint32_t nx, double tau);

/// J(v)(t_M, .) = int_0^{t_M} int_0^1 d_y G_{t_M - r}(x,y) v(r,y) dy dr for v
/// piecewise constant in time on [t_m, t_{m+1}); each v[m] has nx+1 nodal
/// values. Time integration is exact per mode.
Field divergence_convolution(const std::vector<std::vector<double>>& v, std::uint32_t nx,
                             double dt);

struct SmoothingParams {
    double rho = 8.0;
    double q = 2.0;
    double gamma = 4.0;
    double alpha = 0.1;
    double beta = 0.3;
    double delta = 8.0;
    int n_images = 5;
    std::size_t spectral_modes = 128;

    /// kappa = 1 + 1/rho - 1/q.
    double kappa() const noexcept { return 1.0 + 1.0 / rho - 1.0 / q; }
    /// Throws on 1 <= q < rho, gamma > 2/kappa, 0 < alpha < kappa/2, 0 < beta < kappa violations.
    void validate() const;
};

struct KernelSample {
    double t, x, y;
};

/// Candidate constants for |G| <= K1 t^-1/2 e^{-a d^2/t}, |d_y G| <= K1 t^-1 e^{-b d^2/t},
/// |d_xy G| <= K1 t^-3/2 e^{-c d^2/t}.
struct KernelBoundParams {
    double K1 = 1.0;
    double a = 0.125;
    double b = 0.125;
    double c = 0.125;
    int n_images = 5;
};

struct KernelBoundEstimate {
    bool holds = false;
    double worst_ratio = 0.0;  // max |kernel| / bound over the sample set
    KernelSample worst{};
    double fitted_K1 = 0.0;    // smallest K1 that makes the bound hold for the given exponent
};

struct KernelBoundReport {
    // 0: kernel, 1: d_y kernel, 2: d_xy kernel
    std::array<KernelBoundEstimate, 3> estimates{};
};

/// Uniform t x x x y sample: t log-spaced in [t_min, t_max], x,y uniform on [0,1].
std::vector<KernelSample> kernel_sample_grid(double t_min, double t_max, std::size_t nt,
                                             std::size_t nx, std::size_t ny);

KernelBoundReport verify_kernel_bounds(std::span<const KernelSample> samples,
                                       const KernelBoundParams& params);

/// Smoothing test battery item: v(r,y) constant in time on [0,t].
struct SmoothingProbe {
    std::vector<double> nodal;  // nx+1 values of v(., y)
    double t = 0.0;
};

/// Fits C in ||J(v)(t)||_rho <= C t^{kappa/2 - 1/gamma} (int_0^t ||v||_q^gamma)^{1/gamma}
/// over a battery of time-constant probes, returning the largest ratio observed.
double fit_smoothing_constant(std::span<const SmoothingProbe> battery, std::uint32_t nx,
                              std::uint32_t steps, const SmoothingParams& params);

}  // namespace spde
