// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"
#include "spde/control.hpp"
#include "spde/error.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace spde;

namespace {

Field sine_field(std::uint32_t nx, std::size_t k, double a) {
    return sample_field(nx, [&](double x) { return a * oracle::phi(k, x); });
}

}  // namespace

TEST_CASE("control construction and norms") {
    const auto grid = make_grid(16, 10, 0.5);
    const auto psi = Control::from_function(grid, [](double, double x) { return oracle::phi(2, x); });
    // the discrete sine basis is exactly orthonormal, so the norm is T
    CHECK(psi.squared_norm() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rate_functional(psi).I == doctest::Approx(0.25).epsilon(1e-13));
    CHECK_FALSE(rate_functional(psi).admissible.has_value());
    CHECK(*rate_functional(psi, 0.6).admissible);
    CHECK_FALSE(*rate_functional(psi, 0.4).admissible);
    CHECK(Control(grid).is_zero());
    CHECK_FALSE(psi.is_zero());
    CHECK(psi.at(3).size() == 15);

    CHECK_THROWS_AS(Control(grid, std::vector<double>(7, 0.0)), Error);
    std::vector<double> bad(grid.nt * 15, 0.0);
    bad[4] = std::nan("");
    CHECK_THROWS_AS(Control(grid, bad), Error);
    try {
        Control(grid, psi.storage(), 0.1);
        FAIL("expected domain error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Domain);
    }
}

TEST_CASE("integrated coupling is the running space integral") {
    const auto grid = make_grid(8, 3, 0.3);
    const auto psi = Control::from_function(grid, [](double t, double x) { return 1.0 + t + x * x; });
    const auto eff = effective_control(psi, Coupling::Integrated);
    for (std::size_t m = 0; m < grid.nt; ++m) {
        double acc = 0.0;
        for (std::size_t j = 1; j < 8; ++j) {
            const double x = j * grid.dx;
            acc += (1.0 + m * grid.dt + x * x) * grid.dx;
            CHECK(eff[m * 7 + j - 1] == doctest::Approx(acc).epsilon(1e-14));
        }
    }
    CHECK(effective_control(psi, Coupling::Standard) == psi.storage());
}

TEST_CASE("zero control reproduces the uncontrolled deterministic solve") {
    const auto grid = make_grid(32, 40, 0.04);
    const auto coeffs = make_coefficients("burgers", {{"s1", 0.2}});
    const Field eta = sine_field(32, 1, 1.0);
    const auto free = solve_spde(eta, coeffs, 0.0, {}, grid);
    const auto sk = solve_skeleton(eta, coeffs, Control(grid), grid);
    CHECK(free.states == sk.states);
    const auto noisy = solve_spde(eta, coeffs, 0.1, {2, 0, 0}, grid);
    const auto noisy0 = solve_controlled(eta, coeffs, Control(grid), 0.1, {2, 0, 0}, grid);
    CHECK(noisy.states == noisy0.states);
}

TEST_CASE("skeleton of the linear additive equation matches the mode recursion") {
    const auto grid = make_grid(32, 64, 0.2);
    const double s0 = 0.8, a = 1.3;
    const auto coeffs = make_coefficients("linear", {{"s0", s0}});
    const auto psi = Control::from_function(grid, [&](double, double x) { return a * oracle::phi(2, x); });
    const auto sk = solve_skeleton(Field(32), coeffs, psi, grid);
    const double lam = 4 * oracle::pi * oracle::pi;
    double v = 0.0;
    for (std::size_t m = 0; m < grid.nt; ++m) v = std::exp(-lam * grid.dt) * (v + grid.dt * s0 * a);
    CHECK(oracle::mode_coefficient(sk.terminal().storage(), 2) == doctest::Approx(v).epsilon(1e-11));
    CHECK(std::abs(oracle::mode_coefficient(sk.terminal().storage(), 1)) < 1e-13);
    CHECK(solve_controlled(Field(32), coeffs, psi, 0.0, {1, 0, 0}, grid).states == sk.states);
}

TEST_CASE("the control acts as a shift of the driving noise") {
    const auto grid = make_grid(16, 30, 0.06);
    const auto coeffs = make_coefficients("burgers", {{"s1", 0.4}});
    const Field eta = sine_field(16, 1, 0.6);
    const double eps = 0.09;
    const auto psi = Control::from_function(grid, [](double t, double x) { return std::cos(3 * t) * x; });
    const auto noise = sample_white_increments(grid, {8, 1, 0});
    auto shifted = noise;
    for (std::size_t i = 0; i < shifted.white_increments.size(); ++i) {
        shifted.white_increments[i] += psi.storage()[i] * grid.dt * grid.dx / std::sqrt(eps);
    }
    const auto a = solve_controlled_with_noise(eta, coeffs, psi, eps, noise);
    const auto b = solve_with_noise(eta, coeffs, eps, shifted);
    CHECK(sup_path_distance(a, b, 2.0) < 1e-12);
}

TEST_CASE("Girsanov weight matches the direct sums and has unit mean") {
    const auto grid = make_grid(16, 20, 0.1);
    const double eps = 0.25;
    const auto psi = Control::from_function(grid, [](double t, double x) { return 2.0 * x * (1 - x) + t; });
    const auto noise = sample_white_increments(grid, {1, 0, 0});
    double pair = 0.0, sq = 0.0;
    for (std::size_t m = 0; m < grid.nt; ++m) {
        for (std::size_t j = 0; j < 15; ++j) {
            const double p = psi.at(m)[j];
            pair += p * noise.white(m)[j];
            sq += p * p * grid.dt * grid.dx;
        }
    }
    CHECK(control_pairing(psi.storage(), noise) == doctest::Approx(pair).epsilon(1e-12));
    CHECK(girsanov_log_weight(psi, noise, eps) ==
          doctest::Approx(-pair / std::sqrt(eps) - sq / (2 * eps)).epsilon(1e-12));
    CHECK(girsanov_log_weight(Control(grid), noise, eps) == 0.0);
    CHECK_THROWS_AS(girsanov_log_weight(psi, noise, 0.0), Error);

    const std::size_t n = 4000;
    double mean = 0.0, m2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double w = std::exp(girsanov_log_weight(psi, sample_white_increments(grid, {3, r, 0}), eps));
        mean += w;
        m2 += w * w;
    }
    mean /= n;
    const double se = std::sqrt((m2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 4 * se);
}

TEST_CASE("control snapshot round trip") {
    const auto grid = make_grid(16, 12, 0.3);
    const auto psi = Control::from_function(grid, [](double t, double x) { return std::sin(7 * x) - t; });
    const auto file = std::filesystem::temp_directory_path() / "spde_control_roundtrip.bin";
    save_control(file.string(), psi);
    const auto back = load_control(file.string());
    CHECK(back.grid() == grid);
    CHECK(back.storage() == psi.storage());
    std::filesystem::remove(file);
    CHECK_THROWS_AS(load_control("/nonexistent/psi.bin"), Error);
}
