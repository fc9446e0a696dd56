#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pmtomo/errors.hpp"
#include "pmtomo/husimi.hpp"
#include "pmtomo/models.hpp"

using namespace pmtomo;

namespace {

DensityMatrix pure(std::vector<Complex> c) { return DensityMatrix::pure(StateVector::normalized(std::move(c))); }

PolarGrid sample(const DensityMatrix& rho, double r_max = 6.0, std::size_t nr = 241, std::size_t nt = 64) {
    return husimi_q(rho, radial_nodes(r_max, nr), angular_nodes(nt));
}

} // namespace

TEST_CASE("density matrix validation") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    CHECK_NOTHROW(DensityMatrix{m});
    Eigen::MatrixXcd h = m;
    h(0, 1) = Complex(0.1, 0.1);
    CHECK_THROWS_AS(DensityMatrix{h}, DomainError);
    Eigen::MatrixXcd neg = m;
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    CHECK_THROWS_AS(DensityMatrix{neg}, DomainError);
    CHECK_THROWS_AS(DensityMatrix{Eigen::MatrixXcd(0.5 * m)}, DomainError);
    const auto p = pure({1.0, Complex(0.0, 1.0)});
    CHECK(std::abs(p(0, 1) - Complex(0.0, -0.5)) < 1e-15);
}

TEST_CASE("Husimi function of number states") {
    const auto s0 = DensityMatrix::pure(StateVector::number(0));
    const auto s1 = DensityMatrix::pure(StateVector::number(1));
    for (double r : {0.0, 0.4, 1.3, 2.7})
        for (double th : {0.0, 1.1, 4.0}) {
            const Complex z = std::polar(r, th);
            CHECK(husimi_value(s0, z) == doctest::Approx(std::exp(-r * r) / std::numbers::pi).epsilon(1e-14));
            CHECK(husimi_value(s1, z) == doctest::Approx(r * r * std::exp(-r * r) / std::numbers::pi).epsilon(1e-14));
        }
}

TEST_CASE("Husimi function is a normalised nonnegative density") {
    const auto c = DensityMatrix::pure(StateVector::coherent(Complex(1.0, -0.7), 40));
    const auto q = sample(c, 8.0, 321);
    CHECK(q.values.minCoeff() >= 0.0);
    CHECK(std::abs(polar_mass(q) - 1.0) < 1e-6);
    // The peak sits at the coherent amplitude.
    CHECK(husimi_value(c, Complex(1.0, -0.7)) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("husimi_q needs the grid to hold the mass") {
    const auto c = DensityMatrix::pure(StateVector::coherent(Complex(2.0, 0.0), 40));
    CHECK_THROWS_AS(sample(c, 2.0, 81), TruncationError);
}

TEST_CASE("angular coefficients") {
    const auto q0 = sample(DensityMatrix::pure(StateVector::number(0)));
    const auto q1 = sample(DensityMatrix::pure(StateVector::number(1)));
    const auto f0 = angular_coefficient(q0, 0);
    const auto f1 = angular_coefficient(q1, 0);
    const auto f1_odd = angular_coefficient(q1, 1);
    for (std::size_t i = 0; i < q0.r.size(); i += 20) {
        const double r = q0.r[i];
        CHECK(std::abs(f0[i] - 1.0) < 1e-10);
        CHECK(std::abs(f1[i] - r * r) < 1e-10 * std::max(1.0, r * r));
        CHECK(std::abs(f1_odd[i]) < 1e-10 * std::exp(r * r));
    }
    // 64 nodes resolve |k| <= 7 only.
    CHECK_NOTHROW(angular_coefficient(q0, 7));
    CHECK_THROWS_AS(angular_coefficient(q0, 8), ResolutionError);
    CHECK_THROWS_AS(angular_coefficient(q0, -8), ResolutionError);
    PolarGrid uneven = q0;
    uneven.theta[3] += 1e-3;
    CHECK_THROWS_AS(angular_coefficient(uneven, 0), ResolutionError);
}

TEST_CASE("reconstruction of single elements") {
    CHECK(std::abs(reconstruct_element(sample(DensityMatrix::pure(StateVector::number(0))), 0, 0) - 1.0) < 1e-3);
    CHECK(std::abs(reconstruct_element(sample(DensityMatrix::pure(StateVector::number(1))), 1, 0) - 1.0) < 1e-3);
    CHECK(std::abs(reconstruct_element(sample(pure({1.0, 1.0})), 0, 1) - 0.5) < 1e-3);
}

TEST_CASE("round trip for low-lying elements") {
    const std::vector<DensityMatrix> states = {DensityMatrix::pure(StateVector::number(0)),
                                               DensityMatrix::pure(StateVector::number(1)), pure({1.0, 1.0}),
                                               pure({1.0, 0.0, 1.0}), pure({1.0, Complex(0.3, -0.6), 0.5})};
    for (const auto& rho : states) {
        const auto q = sample(rho);
        for (int n = 0; n <= 6; ++n)
            for (int k = -n; 2 * n + k <= 6; ++k) {
                const Complex got = reconstruct_element(q, n, k);
                const Complex want = rho(n, n + k);
                CHECK(std::abs(got - want) < 1e-3);
                if (k != 0) CHECK(std::abs(got - std::conj(reconstruct_element(q, n + k, -k))) < 1e-9);
            }
    }
}

TEST_CASE("reconstruction errors") {
    const auto q = sample(DensityMatrix::pure(StateVector::number(0)));
    CHECK_THROWS_AS(reconstruct_element(q, -1, 0), DomainError);
    CHECK_THROWS_AS(reconstruct_element(q, 0, -1), DomainError);
    CHECK_THROWS_AS(reconstruct_element(q, 3, 5), DomainError);

    // Too few radial nodes inside r_fit for the polynomial basis.
    ReconstructionOptions narrow;
    narrow.r_fit = 0.1;
    CHECK_THROWS_AS(reconstruct_element(q, 0, 0, narrow), ResolutionError);

    // A coherent state with |z| = 2.5 has f far from a low-degree polynomial
    // on [0, r_fit], so a small ceiling cannot fit it.
    const auto c = DensityMatrix::pure(StateVector::coherent(Complex(2.5, 0.0), 60));
    const auto qc = sample(c, 9.0, 361);
    ReconstructionOptions tight;
    tight.derivative_ceiling = 2;
    CHECK_THROWS_AS(reconstruct_element(qc, 0, 0, tight), UnreliableDerivativeError);
}

TEST_CASE("chirped states share smoothed marginals but not Husimi functions") {
    const auto a = StateVector::chirped_gaussian(1.0, 1.0, 80);
    const auto b = StateVector::chirped_gaussian(1.0, -1.0, 80);
    const auto model = ModelSpec::eight_port(GeneratingOperator::vacuum());
    const Grid grid = default_grid(80);
    for (Axis axis : {Axis::Q, Axis::P}) {
        const auto da = measured_marginal_density(model, a, axis, grid);
        const auto db = measured_marginal_density(model, b, axis, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.points; ++i) worst = std::max(worst, std::abs(da.values[i] - db.values[i]));
        CHECK(worst < 1e-10);
    }
    const auto qa = sample(DensityMatrix::pure(a), 8.0, 161);
    const auto qb = sample(DensityMatrix::pure(b), 8.0, 161);
    CHECK((qa.values - qb.values).cwiseAbs().maxCoeff() >= 1e-3);
}
