#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pmtomo/deconv.hpp"
#include "pmtomo/errors.hpp"

using namespace pmtomo;

namespace {

const Grid kGrid = Grid::symmetric(16.0, 4097);

GridDensity gaussian(double var, const Grid& g = kGrid) {
    std::vector<double> v(g.points);
    for (std::size_t i = 0; i < g.points; ++i) v[i] = oracle::gaussian(g.at(i), var);
    return GridDensity::normalized(g, std::move(v));
}

} // namespace

TEST_CASE("Fourier route undoes a Gaussian kernel") {
    const auto out = fourier_deconvolve(gaussian(1.0), gaussian(0.5), 1e-8);
    CHECK(l1_distance(out, gaussian(0.5)) <= 1e-3);
}

TEST_CASE("Fourier route with a discrete delta kernel returns the input") {
    const Grid small = Grid::symmetric(50 * kGrid.dx, 101);
    std::vector<double> delta(small.points, 0.0);
    delta[*small.origin_index()] = 1.0 / small.dx;
    GridDensity measured = gaussian(0.8);
    const auto out = fourier_deconvolve(measured, GridDensity{small, delta}, 1e-8);
    for (std::size_t i = 0; i < kGrid.points; i += 37)
        CHECK(out.values[i] == doctest::Approx(measured.values[i]).epsilon(1e-10).scale(1e-3));
}

TEST_CASE("self-deconvolution concentrates at the origin") {
    // The grid is coarse enough that the kernel transform stays above eps up
    // to Nyquist; otherwise the floor leaves a band-limited sinc.
    const Grid g = Grid::symmetric(30.0, 101);
    const auto f = gaussian(1.0, g);
    const auto full = fourier_deconvolve_full(f, f, 1e-8);
    CHECK(full.floored_fraction == 0.0);
    const auto& out = full.density;
    const std::size_t c = *g.origin_index();
    double near = 0.0;
    for (std::size_t i = c - 3; i <= c + 3; ++i) near += out.values[i] * g.dx;
    CHECK(near >= 0.99);
}

TEST_CASE("convolution round trip before clipping") {
    const auto kernel = gaussian(0.5);
    // A bimodal signal, so the unclipped inverse has some structure.
    std::vector<double> v(kGrid.points);
    for (std::size_t i = 0; i < kGrid.points; ++i) {
        const double x = kGrid.at(i);
        v[i] = 0.6 * oracle::gaussian(x - 1.2, 0.4) + 0.4 * oracle::gaussian(x + 1.0, 0.3);
    }
    const auto rho = GridDensity::normalized(kGrid, v);
    const GridDensity measured{kGrid, convolve(kGrid, kernel.values, kGrid, rho.values)};
    const auto full = fourier_deconvolve_full(measured, kernel, 1e-8);
    const GridDensity back{kGrid, convolve(kGrid, kernel.values, kGrid, full.unclipped)};
    CHECK(l1_distance(back, measured) <= 1e-3);
    CHECK(l1_distance(full.density, rho) <= 1e-3);
}

TEST_CASE("a kernel that is too wide for eps is ill-posed") {
    // The transform of N(0, 4) drops below eps = 0.5 well inside the band of
    // a much narrower measured density.
    CHECK_THROWS_AS(fourier_deconvolve(gaussian(0.05), gaussian(4.0), 0.5), IllPosedError);
    CHECK_THROWS_AS(fourier_deconvolve(gaussian(1.0), gaussian(0.5), -1.0), DomainError);
    CHECK_THROWS_AS(fourier_deconvolve(gaussian(1.0), gaussian(0.5, Grid::symmetric(16.0, 2049))), GridError);
    // Same spacing, but an even node count leaves no node at the origin.
    const Grid even = Grid::symmetric(16.0 * 4095.0 / 4096.0, 4096);
    REQUIRE(even.dx == doctest::Approx(kGrid.dx));
    CHECK_THROWS_AS(fourier_deconvolve(gaussian(1.0), gaussian(0.5, even)), GridError);
}

TEST_CASE("differential route: order 0 is the measured density") {
    const auto m = gaussian(1.0);
    const auto out = gaussian_differential_deconvolve(m, 0);
    CHECK(l1_distance(out, m) < 1e-12);
}

TEST_CASE("differential route recovers Gaussians") {
    CHECK(l1_distance(gaussian_differential_deconvolve(gaussian(1.0), 20), gaussian(0.5)) <= 1e-2);
    CHECK(l1_distance(gaussian_differential_deconvolve(gaussian(0.6), 20), gaussian(0.1)) <= 5e-2);
    // Both routes agree on the same input.
    const auto fourier = fourier_deconvolve(gaussian(0.6), gaussian(0.5));
    CHECK(l1_distance(gaussian_differential_deconvolve(gaussian(0.6), 20), fourier) <= 5e-2);
}

TEST_CASE("differential route term norms") {
    const auto full = gaussian_differential_deconvolve_full(gaussian(1.0), 10);
    REQUIRE(full.term_norms.size() == 11);
    CHECK(full.term_norms[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t k = 1; k < full.term_norms.size(); ++k) CHECK(full.term_norms[k] < full.term_norms[k - 1]);
}

TEST_CASE("differential route reports divergence with the last stable sum") {
    // Sharp density variance 0.3 - 0.5 < 0: the series has nothing to converge to.
    try {
        gaussian_differential_deconvolve(gaussian(0.3), 30);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.last_order() >= 0);
        CHECK(e.last_stable().mass() == doctest::Approx(1.0));
    }
}

TEST_CASE("differential route preconditions") {
    CHECK_THROWS_AS(gaussian_differential_deconvolve(gaussian(1.0), -1), DomainError);
    CHECK_THROWS_AS(gaussian_differential_deconvolve(gaussian(1.0), kMaxDifferentialOrder + 1), DomainError);
    const Grid g = Grid::symmetric(4.0, 401);
    std::vector<double> box(g.points, 0.0);
    for (std::size_t i = 150; i <= 250; ++i) box[i] = 1.0;
    CHECK_THROWS_AS(gaussian_differential_deconvolve(GridDensity::normalized(g, box), 5), PreconditionError);
}
