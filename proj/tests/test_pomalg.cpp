#include <doctest.h>

#include <cmath>

#include "pmtomo/errors.hpp"
#include "pmtomo/pomalg.hpp"

using namespace pmtomo;

namespace {

Eigen::MatrixXcd diag(std::initializer_list<double> d) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return v.asDiagonal();
}

Eigen::MatrixXcd sum(const Effects& e) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(e.front().rows(), e.front().cols());
    for (const auto& m : e) s += m;
    return s;
}

double identity_residual(const Effects& e) {
    return operator_norm(sum(e) - Eigen::MatrixXcd::Identity(e.front().rows(), e.front().cols()));
}

} // namespace

TEST_CASE("operator norm is the largest singular value") {
    Eigen::MatrixXcd a(2, 2);
    a << 0.0, 3.0, 0.0, 0.0;
    CHECK(operator_norm(a) == doctest::Approx(3.0));
    CHECK(operator_norm(diag({-2.0, 1.0})) == doctest::Approx(2.0));
}

TEST_CASE("joint POM validation") {
    CHECK_NOTHROW(FiniteJointPOM(1, 1, {Eigen::MatrixXcd::Identity(2, 2)}));
    CHECK_THROWS_AS(FiniteJointPOM(1, 2, {diag({1.0, 0.0}), diag({0.0, 0.5})}), ConstructionError);
    CHECK_THROWS_AS(FiniteJointPOM(1, 2, {diag({1.2, 0.0}), diag({-0.2, 1.0})}), ConstructionError);
    CHECK_THROWS_AS(FiniteJointPOM(2, 2, {diag({1.0, 0.0}), diag({0.0, 1.0})}), ConstructionError);
    Eigen::MatrixXcd nh = diag({0.5, 0.5});
    nh(0, 1) = 0.1;
    // Sums to the identity, but neither effect is Hermitian.
    const auto v = FiniteJointPOM::check(1, 2, {nh, Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(2, 2) - nh)});
    CHECK_FALSE(v.valid);
    CHECK_FALSE(v.reason.empty());
}

TEST_CASE("trivial POM has trivial marginals") {
    const FiniteJointPOM pom(1, 1, {Eigen::MatrixXcd::Identity(3, 3)});
    const auto [m1, m2] = marginals(pom);
    REQUIRE(m1.size() == 1);
    REQUIRE(m2.size() == 1);
    CHECK(m1[0].isApprox(Eigen::MatrixXcd::Identity(3, 3)));
    CHECK(m2[0].isApprox(Eigen::MatrixXcd::Identity(3, 3)));
    const auto r = verify_lemma1(pom);
    CHECK(r.pass);
    CHECK(r.projective_marginal == 1);
}

TEST_CASE("qubit product POM") {
    const Effects P = {diag({1.0, 0.0}), diag({0.0, 1.0})};
    const Effects B = {diag({0.3, 0.6}), diag({0.7, 0.4})};
    const auto pom = make_projective_product_pom(P, B);
    CHECK(pom.rows() == 2);
    CHECK(pom.cols() == 2);
    CHECK(pom(0, 0).isApprox(diag({0.3, 0.0})));
    CHECK(pom(1, 1).isApprox(diag({0.0, 0.4})));
    const auto [m1, m2] = marginals(pom);
    CHECK(is_projective(m1));
    for (std::size_t i = 0; i < 2; ++i) CHECK((m1[i] - P[i]).norm() < 1e-15);
    for (std::size_t j = 0; j < 2; ++j) CHECK((m2[j] - B[j]).norm() < 1e-15);
    const auto r = verify_lemma1(pom);
    CHECK(r.pass);
    CHECK(r.commute_residual < 1e-15);
    CHECK(r.product_residual < 1e-15);
    CHECK(r.union_product_residual < 1e-15);
}

TEST_CASE("a single-outcome second factor reproduces P") {
    const auto P = random_projective_measurement(3, 3, 11, 0);
    const auto pom = make_projective_product_pom(P, {Eigen::MatrixXcd::Identity(3, 3)});
    for (std::size_t i = 0; i < 3; ++i) CHECK((pom(i, 0) - P[i]).norm() < 1e-12);
}

TEST_CASE("random constructions are valid") {
    const auto P = random_projective_measurement(4, 3, 5, 1);
    CHECK(is_projective(P));
    CHECK(identity_residual(P) < 1e-12);
    const auto B = random_commuting_effects(P, 3, 5, 2);
    CHECK(identity_residual(B) < 1e-10);
    for (const auto& b : B) {
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(b).eigenvalues().minCoeff() >= -1e-12);
        for (const auto& p : P) CHECK(operator_norm(p * b - b * p) < 1e-12);
    }
    CHECK(verify_lemma1(make_projective_product_pom(P, B)).pass);

    const auto g = random_pom(3, 2, 3, 9, 0);
    const auto [m1, m2] = marginals(g);
    CHECK(identity_residual(m1) < 1e-10);
    CHECK(identity_residual(m2) < 1e-10);
    CHECK_FALSE(is_projective(m1));
    CHECK_FALSE(is_projective(m2));
}

TEST_CASE("random generators are reproducible") {
    const auto a = random_projective_product_pom(3, 2, 4, 123, 7);
    const auto b = random_projective_product_pom(3, 2, 4, 123, 7);
    const auto c = random_projective_product_pom(3, 2, 4, 123, 8);
    CHECK(a.effects() == b.effects());
    CHECK(a.effects() != c.effects());
}

TEST_CASE("construction rejects non-commuting effects unless told otherwise") {
    const Effects P = {diag({1.0, 0.0}), diag({0.0, 1.0})};
    Eigen::MatrixXcd b0(2, 2);
    b0 << 0.5, 0.3, 0.3, 0.5;
    const Effects B = {b0, Eigen::MatrixXcd::Identity(2, 2) - b0};
    CHECK_THROWS_AS(make_projective_product_pom(P, B, true), ConstructionError);
    // Pinching by P makes the joint POM a product of P and the pinched B,
    // which then commutes with P.
    const auto pom = make_projective_product_pom(P, B, false);
    const auto r = verify_lemma1(pom);
    CHECK(r.pass);
    const auto [m1, m2] = marginals(pom);
    CHECK(m2[0].isApprox(diag({0.5, 0.5})));

    CHECK_THROWS_AS(make_projective_product_pom({diag({1.0, 0.0}), diag({0.0, 0.5})}, B, false), ConstructionError);
    CHECK_THROWS_AS(make_projective_product_pom({diag({0.5, 0.5}), diag({0.5, 0.5})}, B, false), ConstructionError);
}

TEST_CASE("second marginal projective") {
    const auto P = random_projective_measurement(3, 2, 21, 0);
    const auto B = random_commuting_effects(P, 3, 21, 1);
    // Transpose the index roles: M'(j, i) = M(i, j).
    const auto pom = make_projective_product_pom(P, B);
    Effects swapped;
    for (std::size_t j = 0; j < pom.cols(); ++j)
        for (std::size_t i = 0; i < pom.rows(); ++i) swapped.push_back(pom(i, j));
    const auto r = verify_lemma1(FiniteJointPOM(pom.cols(), pom.rows(), swapped));
    CHECK(r.projective_marginal == 2);
    CHECK(r.pass);
}

TEST_CASE("lemma needs a projective marginal") {
    CHECK_THROWS_AS(verify_lemma1(random_pom(2, 2, 2, 3, 0)), PreconditionError);
}

TEST_CASE("exhaustive check over random product POMs") {
    int checked = 0;
    for (std::uint64_t s = 0; s < 120; ++s) {
        const std::size_t dim = 2 + s % 3;
        const std::size_t rows = 1 + s % 4, cols = 1 + (s / 4) % 4;
        const auto pom = random_projective_product_pom(dim, rows, cols, 77, s);
        const auto r = verify_lemma1(pom);
        CHECK(r.pass);
        CHECK(r.union_commute_residual <= kLemmaTolerance);
        CHECK(r.union_product_residual <= kLemmaTolerance);
        ++checked;
    }
    CHECK(checked >= 100);
}

TEST_CASE("adversarial search finds no counterexample and logs every attempt") {
    const auto rep = adversarial_search(200, 4);
    CHECK(rep.attempts == 200);
    CHECK(rep.log.size() == 200);
    CHECK(rep.counterexamples == 0);
    CHECK(rep.invalid_pom + rep.no_projective_marginal + rep.valid_product + rep.counterexamples == rep.attempts);
    CHECK(rep.invalid_pom > 0);
    CHECK(rep.valid_product > 0);
    for (const auto& rec : rep.log) {
        CHECK_FALSE(rec.strategy.empty());
        if (rec.outcome == AttemptOutcome::ValidProduct) CHECK(rec.product_residual <= 1e-6);
    }
    CHECK(std::string(to_string(AttemptOutcome::Counterexample)) != to_string(AttemptOutcome::InvalidPom));
}
