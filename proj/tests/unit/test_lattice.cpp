// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include "spde/error.hpp"
#include "spde/lattice.hpp"
#include "spde/noise.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace spde;

namespace {

Field random_field(std::uint32_t nx, std::uint64_t key) {
    const CounterStream s(key);
    Field f(nx);
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = s.normal(j);
    return f;
}

}  // namespace

TEST_CASE("make_grid derives spacing") {
    const GridSpec g = make_grid(8, 4, 1.0);
    CHECK(g.dx == 0.125);
    CHECK(g.dt == 0.25);
    CHECK(g.interior() == 7);
    for (std::size_t j = 1; j <= 7; ++j) CHECK(g.node(j) == static_cast<double>(j) / 8.0);
    CHECK(make_grid(256, 4096, 0.5).dt == 0.5 / 4096);
}

TEST_CASE("make_grid rejects degenerate input") {
    CHECK_THROWS_AS(make_grid(1, 4, 1.0), Error);
    CHECK_THROWS_AS(make_grid(8, 0, 1.0), Error);
    CHECK_THROWS_AS(make_grid(8, 4, 0.0), Error);
    CHECK_THROWS_AS(make_grid(8, 4, -1.0), Error);
    try {
        make_grid(1, 4, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Dimension);
    }
}

TEST_CASE("field length must match the grid") {
    CHECK_THROWS_AS(Field(8, std::vector<double>(5)), Error);
    CHECK(Field(8, std::vector<double>(7, 1.0)).all_finite());
    CHECK_FALSE(Field(8, std::vector<double>(7, std::numeric_limits<double>::quiet_NaN())).all_finite());
}

TEST_CASE("sine transform of a basis element") {
    for (std::uint32_t nx : {8u, 64u, 100u}) {
        const Field f = sample_field(nx, [](double x) { return oracle::phi(1, x); });
        const auto c = sine_transform(f);
        CHECK(std::abs(c[0] - 1.0) <= 1e-12);
        for (std::size_t k = 1; k < c.size(); ++k) CHECK(std::abs(c[k]) <= 1e-12);
    }
}

TEST_CASE("sine transform matches direct summation and round trips") {
    for (std::uint32_t nx : {16u, 64u, 250u}) {
        const Field f = random_field(nx, 11 + nx);
        const auto c = sine_transform(f);
        for (std::size_t k = 1; k <= c.size(); k += 3) {
            CHECK(std::abs(c[k - 1] - oracle::mode_coefficient(f.storage(), k)) <= 1e-12);
        }
        const Field back = inverse_sine_transform(nx, c);
        for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(back[j] - f[j]) <= 1e-12);
    }
}

TEST_CASE("Parseval against direct trapezoid quadrature") {
    for (std::uint32_t nx : {16u, 128u}) {
        const Field f = random_field(nx, 3 * nx);
        const auto c = sine_transform(f);
        double s = 0.0;
        for (double v : c) s += v * v;
        const double direct = oracle::sq_norm(f.storage(), 1.0 / nx);
        CHECK(std::abs(direct - s) <= 1e-10 * direct);
    }
}

TEST_CASE("transform length mismatch is an error") {
    CHECK_THROWS_AS(inverse_sine_transform(8, std::vector<double>(5)), Error);
}

TEST_CASE("discrete orthogonality of the eigenbasis") {
    const std::uint32_t nx = 64;
    const double dx = 1.0 / nx;
    double worst = 0.0;
    for (std::size_t j = 1; j <= nx / 4; ++j) {
        for (std::size_t k = 1; k <= nx / 4; ++k) {
            double s = 0.0;
            for (std::size_t i = 1; i < nx; ++i) s += basis::eigenfunction(j, i * dx) * basis::eigenfunction(k, i * dx) * dx;
            worst = std::max(worst, std::abs(s - (j == k ? 1.0 : 0.0)));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("basis functions") {
    for (std::size_t k = 1; k < 6; ++k) {
        CHECK(std::abs(basis::eigenfunction(k, 0.0)) <= 1e-15);
        CHECK(std::abs(basis::eigenfunction(k, 1.0)) <= 1e-14);
        CHECK(basis::antiderivative(k, 0.0) == 0.0);
        CHECK(basis::eigenvalue(k + 1) > basis::eigenvalue(k));
        const double h = 1e-6, x = 0.37;
        const double fd = (basis::antiderivative(k, x + h) - basis::antiderivative(k, x - h)) / (2 * h);
        CHECK(fd == doctest::Approx(basis::eigenfunction(k, x)).epsilon(1e-8));
        const double dfd = (basis::eigenfunction(k, x + h) - basis::eigenfunction(k, x - h)) / (2 * h);
        CHECK(dfd == doctest::Approx(basis::eigenfunction_derivative(k, x)).epsilon(1e-7));
    }
}

TEST_CASE("lp_norm values") {
    const std::uint32_t nx = 64;
    const double dx = 1.0 / nx;
    const Field one(nx, std::vector<double>(nx - 1, 1.0));
    // trapezoid with zero boundary: the two end cells carry half mass
    for (double p : {1.0, 2.0, 8.0}) CHECK(lp_norm(one, p) == doctest::Approx(std::pow(1.0 - dx, 1.0 / p)).epsilon(1e-14));
    CHECK(lp_norm(one, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(lp_norm(Field(nx), 2.0) == 0.0);
    CHECK(lp_norm(Field(nx), std::numeric_limits<double>::infinity()) == 0.0);
    const Field p1 = sample_field(256, [](double x) { return oracle::phi(1, x); });
    CHECK(std::abs(lp_norm(p1, 2.0) - 1.0) <= 1e-6);
    CHECK_THROWS_AS(lp_norm(one, 0.5), Error);
}

TEST_CASE("lp_norm is monotone in p for fields bounded by one") {
    const std::uint32_t nx = 128;
    for (std::uint64_t key = 0; key < 5; ++key) {
        const CounterStream s(key);
        Field f(nx);
        for (std::size_t j = 0; j < f.size(); ++j) f[j] = 2.0 * s.uniform(j) - 1.0;
        double prev = 0.0;
        for (double p : {1.0, 1.5, 2.0, 4.0, 8.0, 16.0}) {
            const double v = lp_norm(f, p);
            CHECK(v >= prev - 1e-15);
            prev = v;
        }
        CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) >= prev);
    }
}

TEST_CASE("derivative pairing matches direct quadrature and its transpose") {
    const std::uint32_t nx = 40;
    const double dx = 1.0 / nx;
    const auto sb = SpectralBasis::get(nx);
    std::vector<double> w(nx + 1);
    for (std::size_t i = 0; i <= nx; ++i) w[i] = std::cos(3.0 * i * dx) + 0.3 * i * dx;
    std::vector<double> c(nx - 1);
    sb->derivative_pairing(w, c);
    for (std::size_t k = 1; k < nx; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i <= nx; ++i) {
            const double weight = (i == 0 || i == nx) ? 0.5 : 1.0;
            s += weight * dx * basis::eigenfunction_derivative(k, i * dx) * w[i];
        }
        CHECK(std::abs(c[k - 1] - s) <= 1e-11);
    }
    // <C_int w, a> = <w_int, C_int^T a>
    std::vector<double> wi(nx + 1, 0.0), a(nx - 1), back(nx - 1), cw(nx - 1);
    for (std::size_t i = 1; i < nx; ++i) wi[i] = std::sin(7.0 * i * dx);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = 1.0 / (k + 1.0);
    sb->derivative_pairing(wi, cw);
    sb->derivative_pairing_transpose(a, back);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) lhs += cw[k] * a[k];
    for (std::size_t j = 0; j < back.size(); ++j) rhs += wi[j + 1] * back[j];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("inner product") {
    const Field a = sample_field(64, [](double x) { return oracle::phi(2, x); });
    const Field b = sample_field(64, [](double x) { return oracle::phi(3, x); });
    CHECK(std::abs(inner(a, b)) <= 1e-13);
    CHECK(inner(a, a) == doctest::Approx(1.0).epsilon(1e-13));
}
