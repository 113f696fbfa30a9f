// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include "spde/error.hpp"
#include "spde/noise.hpp"

#include <doctest.h>

#include <cmath>

using namespace spde;

// Frozen test vectors of the seed derivation and the first variates.
TEST_CASE("seed derivation test vectors") {
    CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(SeedDerivation{0, 0, 0}.key() == 0x238275BC38FCBE91ULL);
    CHECK(SeedDerivation{42, 7, 3}.key() == 0xF55E4254D4655539ULL);
    const CounterStream s(SeedDerivation{42, 7, 3}.key());
    CHECK(s.bits(0) == 0xA75158B2FC7D2BC5ULL);
    CHECK(s.normal(0) == doctest::Approx(-0.90060118637435815).epsilon(1e-15));
    CHECK(s.normal(1) == doctest::Approx(-1.1458364960226426).epsilon(1e-15));
}

TEST_CASE("distinct triples give distinct keys") {
    CHECK(SeedDerivation{1, 0, 0}.key() != SeedDerivation{0, 1, 0}.key());
    CHECK(SeedDerivation{0, 1, 0}.key() != SeedDerivation{0, 0, 1}.key());
    CHECK(SeedDerivation{1, 2, 3}.key() != SeedDerivation{1, 3, 2}.key());
}

TEST_CASE("uniforms are in the open unit interval and normals are standard") {
    const CounterStream s(99);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform(i);
        CHECK_FALSE((u <= 0.0 || u >= 1.0));
        const double z = s.normal(i);
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n, var = sq / n - mean * mean;
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) <= 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("white increments are deterministic and have variance dt dx") {
    const GridSpec g = make_grid(32, 200, 0.5);
    const auto a = sample_white_increments(g, SeedDerivation{5, 1, 0});
    const auto b = sample_white_increments(g, SeedDerivation{5, 1, 0});
    CHECK(a.white_increments == b.white_increments);
    CHECK(a.white_increments.size() == 200u * 31u);
    CHECK(a.modes == 31);
    // 10^5 draws pooled over replicas
    double sum = 0.0, sq = 0.0, quart = 0.0;
    std::size_t n = 0;
    for (std::uint64_t r = 0; r < 17; ++r) {
        const auto w = sample_white_increments(g, SeedDerivation{5, r, 0});
        for (double x : w.white_increments) {
            sum += x;
            sq += x * x;
            quart += x * x * x * x;
            ++n;
        }
    }
    const double v = g.dt * g.dx;
    const double var = sq / n;
    const double se = std::sqrt((quart / n - var * var) / n);
    CHECK(n >= 100000);
    CHECK(std::abs(var - v) <= 3.0 * se);
}

TEST_CASE("sheet covariance matches min(t1,t2) min(x1,x2)") {
    const GridSpec g = make_grid(16, 8, 1.0);
    const std::size_t reps = 20000;
    const std::size_t m1 = 3, j1 = 11, m2 = 6, j2 = 5;
    std::vector<double> prod(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto w = sample_white_increments(g, SeedDerivation{77, r, 0});
        prod[r] = sheet_value(w, m1, j1) * sheet_value(w, m2, j2);
    }
    double mean = 0.0, sq = 0.0;
    for (double p : prod) mean += p;
    mean /= reps;
    for (double p : prod) sq += (p - mean) * (p - mean);
    const double se = std::sqrt(sq / (reps - 1) / reps);
    const double expected = std::min(g.time(m1), g.time(m2)) * std::min(g.node(j1), g.node(j2));
    CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("sheet expansion") {
    const GridSpec g = make_grid(128, 16, 1.0);
    const auto zero = sample_sheet_expansion(g, 0, SeedDerivation{1, 2, 0});
    CHECK(zero.is_zero());
    for (double x : zero.white_increments) CHECK(x == 0.0);

    const auto k64 = sample_sheet_expansion(g, 64, SeedDerivation{1, 2, 0});
    const auto k16 = sample_sheet_expansion(g, 16, SeedDerivation{1, 2, 0});
    for (std::size_t m = 0; m < g.nt; ++m) {
        for (std::size_t i = 0; i < 16; ++i) CHECK(k64.mode(m)[i] == k16.mode(m)[i]);
    }
    // modes are the source of truth: cells = dx * sum_i phi_i(x_j) dw_i
    for (std::size_t j = 0; j < 127; j += 17) {
        double direct = 0.0;
        for (std::size_t i = 1; i <= 16; ++i) direct += oracle::phi(i, g.node(j + 1)) * k16.mode(3)[i - 1];
        CHECK(k16.white(3)[j] == doctest::Approx(g.dx * direct).epsilon(1e-12));
    }
}

TEST_CASE("variance of the truncated sheet at (1,1)") {
    const GridSpec g = make_grid(128, 4, 1.0);
    const std::size_t K = 64, reps = 20000;
    std::vector<double> w11(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto n = sample_sheet_expansion(g, K, SeedDerivation{3, r, 0});
        // W(1,1) = sum_i h_i(1) w_i(1) with the exact antiderivative
        double s = 0.0;
        for (std::size_t i = 1; i <= K; ++i) {
            double wi = 0.0;
            for (std::size_t m = 0; m < g.nt; ++m) wi += n.mode(m)[i - 1];
            s += std::sqrt(2.0) * (1.0 - std::cos(i * oracle::pi)) / (i * oracle::pi) * wi;
        }
        w11[r] = s;
    }
    double sq = 0.0, q4 = 0.0;
    for (double x : w11) {
        sq += x * x;
        q4 += x * x * x * x;
    }
    const double var = sq / reps;
    const double se = std::sqrt((q4 / reps - var * var) / reps);
    double expected = 0.0;
    for (std::size_t i = 1; i <= K; ++i) {
        const double h = std::sqrt(2.0) * (1.0 - std::cos(i * oracle::pi)) / (i * oracle::pi);
        expected += h * h;
    }
    CHECK(std::abs(var - expected) <= 3.0 * se);
}

TEST_CASE("partial sum identity") {
    for (std::size_t K : {0u, 1u, 10u}) CHECK(partial_sum_identity(K, 0.0) == 0.0);
    CHECK(partial_sum_identity(1, 1.0) == doctest::Approx(8.0 / (oracle::pi * oracle::pi)).epsilon(1e-14));
    double direct = 0.0;
    for (std::size_t k = 1; k <= 10000; ++k) {
        const double h = std::sqrt(2.0) * (1.0 - std::cos(k * oracle::pi * 0.37)) / (k * oracle::pi);
        direct += h * h;
    }
    const double v = partial_sum_identity(10000, 0.37);
    CHECK(std::abs(v - 0.37) <= 1e-3);
    CHECK(v == doctest::Approx(direct).epsilon(1e-12));
    for (double x : {0.1, 0.5, 0.9, 1.0}) {
        double prev = 0.0;
        for (std::size_t K = 1; K < 200; K += 7) {
            const double s = partial_sum_identity(K, x);
            CHECK(s >= prev);
            CHECK(s <= x + 1e-12);
            prev = s;
        }
    }
    CHECK_THROWS_AS(partial_sum_identity(3, 1.5), Error);
}
