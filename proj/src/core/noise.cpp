// SPDX-License-Identifier: Apache-2.0
#include "spde/noise.hpp"

#include "spde/error.hpp"

#include <algorithm>
#include <cmath>

namespace spde {

double CounterStream::uniform(std::uint64_t counter) const noexcept {
    // 53 high bits, offset by half an ulp so 0 and 1 are excluded
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::normal(std::uint64_t m) const noexcept {
    const double u1 = uniform(2 * m);
    const double u2 = uniform(2 * m + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * basis::pi * u2);
}

NoiseRealization sample_white_increments(const GridSpec& grid, const SeedDerivation& seed) {
    return sample_sheet_expansion(grid, grid.interior(), seed);
}

NoiseRealization sample_sheet_expansion(const GridSpec& grid, std::size_t K_noise,
                                        const SeedDerivation& seed) {
    require(grid.nx >= 2 && grid.nt >= 1, ErrorCode::Dimension, "invalid grid for noise");
    NoiseRealization out;
    out.grid = grid;
    out.seed = seed;
    out.modes = K_noise;
    const std::size_t n = grid.interior();
    out.white_increments.assign(grid.nt * n, 0.0);
    if (K_noise == 0) return out;

    out.mode_increments.assign(grid.nt * K_noise, 0.0);
    const double sd = std::sqrt(grid.dt);
    for (std::size_t i = 1; i <= K_noise; ++i) {
        SeedDerivation s = seed;
        s.stream = i;
        const CounterStream stream(s.key());
        for (std::size_t m = 0; m < grid.nt; ++m) {
            out.mode_increments[m * K_noise + (i - 1)] = sd * stream.normal(m);
        }
    }

    // white_j = dx * sum_{i <= min(K, nx-1)} hfrak_i(x_j) dw_i; modes above nx-1
    // alias onto the grid and are folded in by direct summation.
    const auto sb = SpectralBasis::get(grid.nx);
    const std::size_t resolved = std::min(K_noise, n);
    std::vector<double> coeffs(n, 0.0), field(n);
    for (std::size_t m = 0; m < grid.nt; ++m) {
        const double* dw = out.mode_increments.data() + m * K_noise;
        std::fill(coeffs.begin(), coeffs.end(), 0.0);
        for (std::size_t i = 0; i < resolved; ++i) coeffs[i] = dw[i];
        sb->inverse(coeffs, field);
        double* w = out.white_increments.data() + m * n;
        for (std::size_t j = 0; j < n; ++j) w[j] = field[j] * grid.dx;
        for (std::size_t i = resolved + 1; i <= K_noise; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                w[j] += grid.dx * basis::eigenfunction(i, grid.node(j + 1)) * dw[i - 1];
            }
        }
    }
    return out;
}

double partial_sum_identity(std::size_t K, double x) {
    require(x >= 0.0 && x <= 1.0, ErrorCode::Domain, "partial_sum_identity needs x in [0,1]");
    double s = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double h = basis::antiderivative(k, x);
        s += h * h;
    }
    return s;
}

double sheet_value(const NoiseRealization& noise, std::size_t m, std::size_t j) {
    const std::size_t n = noise.grid.interior();
    require(m <= noise.grid.nt && j >= 1 && j <= n, ErrorCode::Dimension,
            "sheet index out of range");
    double s = 0.0;
    for (std::size_t mm = 0; mm < m; ++mm) {
        const double* w = noise.white_increments.data() + mm * n;
        for (std::size_t jj = 0; jj < j; ++jj) s += w[jj];
    }
    return s;
}

}  // namespace spde
