#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pmtomo/errors.hpp"
#include "pmtomo/hilbert.hpp"

using namespace pmtomo;

TEST_CASE("state vectors must be normalised") {
    CHECK_THROWS_AS(StateVector({1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(StateVector::normalized({0.0, 0.0}), DomainError);
    const auto s = StateVector::normalized({1.0, Complex(0.0, 1.0)});
    CHECK(std::abs(s[1] - Complex(0.0, 1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(s[7] == Complex(0.0));
    const auto n = StateVector::number(3, 6);
    CHECK(n.dim() == 6);
    CHECK(n[3] == Complex(1.0));
}

TEST_CASE("coherent state coefficients and truncation") {
    const Complex z(0.8, -0.6);
    const auto s = StateVector::coherent(z, 40);
    double fact = 1.0;
    for (int n = 0; n < 10; ++n) {
        if (n > 0) fact *= n;
        const Complex expected = std::exp(-0.5 * std::norm(z)) * std::pow(z, n) / std::sqrt(fact);
        CHECK(std::abs(s[n] - expected) < 1e-15);
    }
    CHECK(mean_photon_number(s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(StateVector::coherent(Complex(3.0, 0.0), 10), TruncationError);
}

TEST_CASE("Hermite functions match closed forms") {
    for (double q : {-2.5, -0.3, 0.0, 0.7, 3.1}) {
        const auto h = hermite_functions(q, 4);
        for (int n = 0; n < 4; ++n) CHECK(h[n] == doctest::Approx(oracle::hermite_function(n, q)).epsilon(1e-13));
    }
}

TEST_CASE("Hermite functions stay finite and orthonormal at high order") {
    const Grid g = Grid::symmetric(30.0, 6001);
    const std::size_t count = 201;
    std::vector<std::vector<double>> h(g.points);
    for (std::size_t i = 0; i < g.points; ++i) {
        h[i] = hermite_functions(g.at(i), count);
        for (double v : h[i]) REQUIRE(std::isfinite(v));
    }
    for (std::size_t a : {0ul, 57ul, 200ul})
        for (std::size_t b : {0ul, 57ul, 200ul}) {
            double s = 0.0;
            for (std::size_t i = 0; i < g.points; ++i) s += h[i][a] * h[i][b] * g.dx;
            CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
        }
}

TEST_CASE("position and momentum densities of |1>") {
    const auto one = StateVector::number(1);
    const Grid g = default_grid(2);
    const auto rq = position_density(one, g);
    const auto rp = momentum_density(one, g);
    for (std::size_t i = 0; i < g.points; i += 97) {
        const double x = g.at(i);
        const double expected = 2.0 * x * x * std::exp(-x * x) / std::sqrt(std::numbers::pi);
        CHECK(rq.values[i] == doctest::Approx(expected).epsilon(1e-10));
        CHECK(rp.values[i] == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("Fourier transform rotates the wavefunction") {
    // psi^(p) = (2 pi)^(-1/2) int exp(-ipq) psi(q) dq, checked by quadrature.
    const auto s = StateVector::normalized({1.0, Complex(0.5, 0.5), -0.3});
    const auto f = fourier_transform(s);
    for (double p : {-1.3, 0.0, 0.4, 2.0}) {
        const double re = oracle::integrate_line([&](double q) {
            return (std::exp(Complex(0.0, -p * q)) * wavefunction_at(s, q)).real();
        });
        const double im = oracle::integrate_line([&](double q) {
            return (std::exp(Complex(0.0, -p * q)) * wavefunction_at(s, q)).imag();
        });
        const Complex expected = Complex(re, im) / std::sqrt(2.0 * std::numbers::pi);
        CHECK(std::abs(wavefunction_at(f, p) - expected) < 1e-10);
    }
}

TEST_CASE("reflection and conjugation act on the wavefunction") {
    const auto s = StateVector::normalized({1.0, Complex(0.2, 0.7), Complex(-0.4, 0.1)});
    for (double q : {-1.0, 0.3, 2.2}) {
        CHECK(std::abs(wavefunction_at(s.reflected(), q) - wavefunction_at(s, -q)) < 1e-14);
        CHECK(std::abs(wavefunction_at(s.conjugated(), q) - std::conj(wavefunction_at(s, q))) < 1e-14);
    }
}

TEST_CASE("exact moments agree with dense matrix powers") {
    const std::vector<StateVector> states = {StateVector::number(0), StateVector::number(3),
                                             StateVector::normalized({1.0, 0.0, 1.0}),
                                             StateVector::normalized({1.0, Complex(0.0, 1.0), 0.5}),
                                             StateVector::coherent(Complex(1.0, -0.5), 30)};
    for (const auto& s : states)
        for (Axis axis : {Axis::Q, Axis::P})
            for (int k = 0; k <= 10; ++k)
                CHECK(exact_moment(s, axis, k) == doctest::Approx(oracle::matrix_moment(s, axis, k)).epsilon(1e-11));
}

TEST_CASE("number-state moments in closed form") {
    for (int n = 0; n < 5; ++n) {
        const auto s = StateVector::number(n);
        CHECK(exact_moment(s, Axis::Q, 2) == doctest::Approx(n + 0.5));
        CHECK(exact_moment(s, Axis::P, 4) == doctest::Approx((6.0 * n * n + 6.0 * n + 3.0) / 4.0));
        CHECK(std::abs(exact_moment(s, Axis::Q, 3)) < 1e-14);
    }
    CHECK_THROWS_AS(exact_moment(StateVector::number(0), Axis::Q, kMaxMomentOrder + 1), DomainError);
}

TEST_CASE("rotated quadratures") {
    const auto s = StateVector::normalized({1.0, Complex(0.3, 0.9), 0.2});
    for (int k = 1; k <= 4; ++k) {
        CHECK(quadrature_moment(s, 0.0, k) == doctest::Approx(exact_moment(s, Axis::Q, k)).epsilon(1e-13));
        CHECK(quadrature_moment(s, std::numbers::pi / 2, k) ==
              doctest::Approx(exact_moment(s, Axis::P, k)).epsilon(1e-12));
    }
    const Complex z(0.6, 1.1);
    const auto c = StateVector::coherent(z, 40);
    const double theta = 0.7;
    CHECK(quadrature_moment(c, theta, 1) ==
          doctest::Approx(std::sqrt(2.0) * (std::exp(Complex(0.0, -theta)) * z).real()).epsilon(1e-12));
    CHECK(variance(c, Axis::Q) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("wavefunction sampling checks the grid") {
    const auto s = StateVector::number(20);
    CHECK_THROWS_AS(hermite_wavefunction(s, Grid::symmetric(20.0, 41)), ResolutionError);
    CHECK_THROWS_AS(hermite_wavefunction(s, Grid::symmetric(3.0, 4001)), GridError);
    CHECK_NOTHROW(hermite_wavefunction(s, default_grid(s.dim())));
}

TEST_CASE("chirped Gaussian expansion reproduces the closed-form wavefunction") {
    const double a = 1.0, b = -0.7;
    const auto s = StateVector::chirped_gaussian(a, b, 80);
    for (double q : {-1.5, -0.2, 0.0, 0.9}) {
        const Complex expected = std::pow(2.0 * a / std::numbers::pi, 0.25) * std::exp(-Complex(a, b) * q * q);
        CHECK(std::abs(wavefunction_at(s, q) - expected) < 1e-10);
    }
    CHECK(variance(s, Axis::Q) == doctest::Approx(1.0 / (4.0 * a)).epsilon(1e-10));
    CHECK(variance(s, Axis::P) == doctest::Approx((a * a + b * b) / a).epsilon(1e-10));
    CHECK_THROWS_AS(StateVector::chirped_gaussian(a, b, 10), TruncationError);
}
