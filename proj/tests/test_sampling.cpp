#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "pmtomo/errors.hpp"
#include "pmtomo/models.hpp"
#include "pmtomo/sampling.hpp"

using namespace pmtomo;

namespace {

GridDensity gaussian_density(double var) {
    const Grid g = Grid::symmetric(12.0, 4097);
    std::vector<double> v(g.points);
    for (std::size_t i = 0; i < g.points; ++i) v[i] = oracle::gaussian(g.at(i), var);
    return GridDensity::normalized(g, std::move(v));
}

} // namespace

TEST_CASE("counter RNG streams are reproducible and distinct") {
    CounterRng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        CHECK(x == b());
        seen.insert(x);
        seen.insert(c());
        seen.insert(d());
    }
    CHECK(seen.size() == 3000);
    CHECK(a.counter() == 1000);
}

TEST_CASE("uniform and normal draws have the right low moments") {
    CounterRng r(7, 3);
    constexpr int n = 200000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        su += u;
        su2 += u * u;
        const double z = r.normal();
        sn += z;
        sn2 += z * z;
        sn4 += z * z * z * z;
    }
    CHECK(std::abs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
    CHECK(std::abs(su2 / n - 1.0 / 3) < 0.005);
    CHECK(std::abs(sn / n) < 5 / std::sqrt(n));
    CHECK(std::abs(sn2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
    CHECK(std::abs(sn4 / n - 3.0) < 5 * std::sqrt(96.0 / n));
}

TEST_CASE("samples do not depend on the thread count") {
    const auto d = gaussian_density(0.5);
    const std::size_t n = 3 * kSamplesPerStream + 123;
    const auto one = sample_outcomes(d, n, 99, 1);
    const auto four = sample_outcomes(d, n, 99, 4);
    CHECK(one.values == four.values);
    CHECK(one.seed == 99);
    CHECK(sample_outcomes(d, n, 100, 1).values != one.values);
}

TEST_CASE("sampled Gaussian moments agree within their standard errors") {
    const double var = 0.7;
    const auto s = sample_outcomes(gaussian_density(var), 400000, 5, 0);
    const auto m = empirical_moments(s, 6);
    const double exact[] = {1.0, 0.0, var, 0.0, 3 * var * var, 0.0, 15 * var * var * var};
    for (int k = 1; k <= 6; ++k) {
        REQUIRE(m.se[k] > 0.0);
        CHECK(std::abs(m.m[k] - exact[k]) / m.se[k] < 5.0);
    }
    CHECK(m.se[2] == doctest::Approx(std::sqrt(2 * var * var / 400000)).epsilon(0.02));
    CHECK(m.covariance.rows() == 7);
    CHECK(m.covariance(2, 4) == doctest::Approx(m.covariance(4, 2)));
    CHECK(m.covariance(2, 2) == doctest::Approx(m.se[2] * m.se[2]));
}

TEST_CASE("sampled outcome moments match the analytic measured moments") {
    // Fixed seed, so this is deterministic; with a fresh seed a 5-sigma
    // threshold over 16 moments would fail about once in 10^5 runs.
    const auto model = ModelSpec::eight_port(GeneratingOperator::vacuum());
    const auto state = StateVector::normalized({1.0, 1.0});
    const Grid grid = default_grid(state.dim());
    for (Axis axis : {Axis::Q, Axis::P}) {
        const auto d = measured_marginal_density(model, state, axis, grid);
        const auto m = empirical_moments(sample_outcomes(d, 1000000, 314, 0), 8);
        const auto exact = measured_moments(model, state, axis, 8);
        for (int k = 1; k <= 8; ++k) CHECK(std::abs(m.m[k] - exact[k]) <= 5.0 * m.se[k]);
    }
}

TEST_CASE("constant samples have zero spread") {
    SampleSet s;
    s.values.assign(50, 1.5);
    const auto m = empirical_moments(s, 4);
    for (int k = 0; k <= 4; ++k) {
        CHECK(m.m[k] == doctest::Approx(std::pow(1.5, k)));
        CHECK(m.se[k] == 0.0);
    }
    CHECK_FALSE(m.above_reliability_ceiling);
}

TEST_CASE("orders above the ceiling are flagged") {
    SampleSet s;
    s.values = {-1.0, 0.5, 2.0};
    CHECK_FALSE(empirical_moments(s, kEmpiricalMomentCeiling).above_reliability_ceiling);
    CHECK(empirical_moments(s, kEmpiricalMomentCeiling + 1).above_reliability_ceiling);
}

TEST_CASE("sampling input validation") {
    const auto d = gaussian_density(1.0);
    CHECK_THROWS_AS(sample_outcomes(d, 0, 1), InputError);
    GridDensity bad = d;
    for (double& v : bad.values) v *= 2.0;
    CHECK_THROWS_AS(sample_outcomes(bad, 10, 1), InputError);
    CHECK_THROWS_AS(empirical_moments(SampleSet{}, 2), InputError);
    SampleSet s;
    s.values = {1.0};
    CHECK_THROWS_AS(empirical_moments(s, -1), DomainError);
}

TEST_CASE("samples CSV carries seed and a header") {
    SampleSet s;
    s.values = {0.25, -1.0};
    s.seed = 17;
    s.source = "Q";
    std::ostringstream os;
    write_samples_csv(os, s);
    CHECK(os.str() == "# seed=17 source=Q\nvalue\n0.25\n-1\n");
}
