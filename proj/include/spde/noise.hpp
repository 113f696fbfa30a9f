// SPDX-License-Identifier: Apache-2.0
//
// Counter-based Gaussian streams and the space-time white noise / truncated
// Brownian-sheet realizations built from them.
#pragma once

#include "spde/lattice.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spde {

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Key of the stream (master, replica, stream). Pure function:
///   key = mix64(mix64(mix64(master) ^ replica) ^ stream)
struct SeedDerivation {
    std::uint64_t master = 0;
    std::uint64_t replica = 0;
    std::uint64_t stream = 0;

    constexpr std::uint64_t key() const noexcept {
        return mix64(mix64(mix64(master) ^ replica) ^ stream);
    }
};

/// Random access into one derived stream.
class CounterStream {
public:
    explicit constexpr CounterStream(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix64(key_ ^ mix64(counter));
    }
    /// Uniform in (0,1).
    double uniform(std::uint64_t counter) const noexcept;
    /// Standard normal; variate m consumes counters 2m and 2m+1 (Box-Muller).
    double normal(std::uint64_t m) const noexcept;

private:
    std::uint64_t key_;
};

/// One noise realization on a grid. The mode increments dw[m][i] ~ N(0, dt),
/// i = 1..K_noise, are the source of truth; white[m][j] is the induced cell
/// increment of the Brownian sheet, white = dx * sum_i hfrak_i(x_j) dw_i.
/// With K_noise = nx-1 the cell increments are i.i.d. N(0, dt dx).
struct NoiseRealization {
    GridSpec grid{};
    SeedDerivation seed{};
    std::size_t modes = 0;
    std::vector<double> mode_increments;   // nt x modes, time-major
    std::vector<double> white_increments;  // nt x (nx-1), time-major

    std::span<const double> white(std::size_t m) const {
        return {white_increments.data() + m * grid.interior(), grid.interior()};
    }
    std::span<const double> mode(std::size_t m) const {
        return {mode_increments.data() + m * modes, modes};
    }
    bool is_zero() const noexcept { return modes == 0; }
};

/// Full white noise: mode expansion with K_noise = nx-1.
NoiseRealization sample_white_increments(const GridSpec& grid, const SeedDerivation& seed);

/// Truncated sheet expansion with modes 1..K_noise; mode i uses stream i of
/// the seed, so draws with different K_noise agree on the shared modes.
NoiseRealization sample_sheet_expansion(const GridSpec& grid, std::size_t K_noise,
                                        const SeedDerivation& seed);

/// sum_{i <= K} h_i(x)^2 (tends to x as K -> infinity).
double partial_sum_identity(std::size_t K, double x);

/// Reconstructs W(t_m, x_j) = sum_{m' < m} sum_{j' <= j} white[m'][j'] (m = 0..nt, j = 1..nx-1).
double sheet_value(const NoiseRealization& noise, std::size_t m, std::size_t j);

}  // namespace spde
