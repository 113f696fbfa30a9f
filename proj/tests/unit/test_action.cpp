// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"
#include "spde/action.hpp"
#include "spde/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace spde;

namespace {

Field sine_field(std::uint32_t nx, std::size_t k, double a) {
    return sample_field(nx, [&](double x) { return a * oracle::phi(k, x); });
}

}  // namespace

TEST_CASE("penalized objective is action plus weighted squared residual") {
    const auto grid = make_grid(16, 20, 0.2);
    const auto coeffs = make_coefficients("linear");
    const auto psi = Control::from_function(grid, [](double, double x) { return x; });
    const Field target = sine_field(16, 1, 0.5);
    const auto v = penalized_objective(target, Field(16), coeffs, psi, 7.0, true);
    const auto sk = solve_skeleton(Field(16), coeffs, psi, grid);
    double res2 = 0.0;
    for (std::size_t j = 0; j < 15; ++j) res2 += std::pow(sk.terminal()[j] - target[j], 2) * grid.dx;
    CHECK(v.residual == doctest::Approx(std::sqrt(res2)).epsilon(1e-12));
    CHECK(v.action == doctest::Approx(0.5 * psi.squared_norm()));
    CHECK(v.J == doctest::Approx(v.action + 3.5 * res2).epsilon(1e-12));
    CHECK(v.gradient.size() == psi.storage().size());
}

TEST_CASE("adjoint gradient agrees with central differences") {
    const auto grid = make_grid(32, 64, 0.2);
    const Field target = sine_field(32, 1, 0.8);
    const Field eta = sine_field(32, 2, 0.3);
    const auto psi = Control::from_function(grid, [](double t, double x) { return std::sin(3 * x) + t; });
    const auto dir = Control::from_function(grid, [](double t, double x) { return x * (1 - x) * (1 + t); });
    for (const char* fam : {"linear", "burgers", "reaction"}) {
        INFO(fam);
        auto params = std::map<std::string, double>{};
        if (std::string(fam) != "linear") params["s1"] = 0.3;
        const auto coeffs = make_coefficients(fam, params);
        CHECK(gradient_check(target, eta, coeffs, psi, dir, 1e-4) < 1e-5);
        SolverConfig integrated;
        integrated.coupling = Coupling::Integrated;
        CHECK(gradient_check(target, eta, coeffs, psi, dir, 1e-4, 10.0, integrated) < 1e-5);
    }
    CHECK_THROWS_AS(gradient_check(target, eta, make_coefficients("linear"), psi, Control(grid), 1e-4), Error);
}

TEST_CASE("minimum action of the linear additive equation matches the quadratic program") {
    const std::uint32_t nt = 256;
    const double T = 0.5, a = 1.0;
    const auto grid = make_grid(32, nt, T);
    const auto coeffs = make_coefficients("linear");
    const auto res = minimize_action(sine_field(32, 1, a), Field(32), coeffs, grid);
    CHECK(res.converged);
    CHECK(res.residual <= 1e-3);
    const double discrete = oracle::lq_discrete_action(1, a, T, nt);
    CHECK(res.I == doctest::Approx(discrete).epsilon(5e-3));
    // the time-discrete and continuous minima agree to first order in dt
    CHECK(discrete == doctest::Approx(oracle::lq_continuous_action(1, a, T)).epsilon(3e-2));
    CHECK_FALSE(res.trace.empty());
    CHECK(rate_functional(res.psi).I == doctest::Approx(res.I));
}

double round_trip_error(std::uint32_t nx, std::uint32_t nt) {
    const auto grid = make_grid(nx, nt, 0.5);
    const auto coeffs = make_coefficients("linear", {{"c", -1.0}});
    const auto psi = Control::from_function(grid, [](double t, double x) { return oracle::phi(1, x) * (1 + t); });
    const auto sk = solve_skeleton(sine_field(nx, 3, 0.2), coeffs, psi, grid);
    const double I = rate_functional(psi).I;
    return std::abs(path_rate_function(sk.states, coeffs, grid).I - I) / I;
}

TEST_CASE("path rate of a skeleton path approximates the action of its control") {
    const double coarse = round_trip_error(64, 512);
    const double fine = round_trip_error(128, 1024);
    CHECK(coarse <= 0.05);
    CHECK(fine < coarse);
}

TEST_CASE("path rate of the uncontrolled flow vanishes") {
    const auto grid = make_grid(32, 50, 0.1);
    const auto coeffs = make_coefficients("burgers", {{"s1", 0.3}});
    const auto free = solve_spde(sine_field(32, 1, 0.8), coeffs, 0.0, {}, grid);
    CHECK(path_rate_function(free.states, coeffs, grid).I <= 1e-6);
}

TEST_CASE("path rate preconditions") {
    const auto grid = make_grid(32, 50, 0.1);
    const auto coeffs = make_coefficients("linear");
    const auto free = solve_spde(sine_field(32, 2, 0.8), coeffs, 0.0, {}, grid);
    auto vanishing = make_coefficients("linear");
    vanishing.sigma = [](double, double, double r) { return r; };
    vanishing.dsigma = [](double, double, double) { return 1.0; };
    try {
        path_rate_function(free.states, vanishing, grid);
        FAIL("expected degenerate sigma");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Degenerate);
        CHECK(std::string(e.what()).rfind("sigma-degenerate", 0) == 0);
    }
    std::vector<Field> short_path(free.states.begin(), free.states.begin() + 10);
    CHECK_THROWS_AS(path_rate_function(short_path, coeffs, grid), Error);
}

TEST_CASE("minimum action does not exceed the rate of a feasible comparison path") {
    const auto grid = make_grid(32, 128, 0.5);
    const auto coeffs = make_coefficients("linear");
    const Field target = sine_field(32, 1, 0.5);
    const auto res = minimize_action(target, Field(32), coeffs, grid);
    REQUIRE(res.converged);
    // straight-line interpolation to the target is feasible
    std::vector<Field> path;
    for (std::size_t m = 0; m <= grid.nt; ++m) {
        Field f = target;
        for (std::size_t j = 0; j < f.size(); ++j) f[j] *= static_cast<double>(m) / grid.nt;
        path.push_back(f);
    }
    CHECK(res.I <= path_rate_function(path, coeffs, grid).I);
}

TEST_CASE("minimize_action rejects the cutoff radius") {
    const auto grid = make_grid(16, 10, 0.1);
    SolverConfig cfg;
    cfg.R = 2.0;
    CHECK_THROWS_AS(minimize_action(sine_field(16, 1, 0.1), Field(16), make_coefficients("linear"), grid, {}, cfg),
                    Error);
}
