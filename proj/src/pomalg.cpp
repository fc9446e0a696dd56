#include "pmtomo/pomalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pmtomo/errors.hpp"
#include "pmtomo/sampling.hpp"

namespace pmtomo {

namespace {

using Matrix = Eigen::MatrixXcd;

constexpr double kPsdTolerance = 1e-12;
constexpr double kSumTolerance = 1e-10;
constexpr double kCounterexampleThreshold = 1e-6;

Matrix sum(const Effects& e, std::size_t dim) {
    Matrix s = Matrix::Zero(dim, dim);
    for (const auto& m : e) s += m;
    return s;
}

double min_eigenvalue(const Matrix& m) {
    const Matrix h = 0.5 * (m + m.adjoint());
    return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

Matrix complex_gaussian(std::size_t rows, std::size_t cols, CounterRng& rng) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
    return m;
}

Matrix haar_unitary(std::size_t dim, CounterRng& rng) {
    const Matrix z = complex_gaussian(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

Matrix hermitian_kick(std::size_t dim, CounterRng& rng) {
    const Matrix z = complex_gaussian(dim, dim, rng);
    return 0.5 * (z + z.adjoint());
}

Matrix inverse_sqrt(const Matrix& s) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.adjoint()));
    const Eigen::VectorXd w = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

// Random PSD effects on C^dim summing to the identity.
Effects random_effects(std::size_t dim, std::size_t outcomes, CounterRng& rng) {
    Effects a(outcomes);
    Matrix s = Matrix::Zero(dim, dim);
    for (auto& m : a) {
        const Matrix g = complex_gaussian(dim, dim, rng);
        m = g * g.adjoint();
        s += m;
    }
    const Matrix w = inverse_sqrt(s);
    for (auto& m : a) {
        m = w * m * w;
        m = 0.5 * (m + m.adjoint());
    }
    return a;
}

// Orthonormal basis of range(P) for a projection P.
Matrix range_basis(const Matrix& p) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (p + p.adjoint()));
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) cols.push_back(i);
    Matrix v(p.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]);
    return v;
}

std::string format_residual(double r) {
    std::ostringstream os;
    os.precision(3);
    os << r;
    return os.str();
}

} // namespace

PomValidity FiniteJointPOM::check(std::size_t rows, std::size_t cols, const Effects& effects) {
    PomValidity v;
    if (rows == 0 || cols == 0 || effects.size() != rows * cols) {
        v.valid = false;
        v.reason = "effect count does not match the outcome grid";
        return v;
    }
    const auto dim = effects.front().rows();
    if (dim == 0) {
        v.valid = false;
        v.reason = "zero-dimensional Hilbert space";
        return v;
    }
    v.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < effects.size(); ++e) {
        const auto& m = effects[e];
        if (m.rows() != dim || m.cols() != dim) {
            v.valid = false;
            v.reason = "effects have mismatched shapes";
            return v;
        }
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kPsdTolerance && v.valid) {
            v.valid = false;
            v.reason = "effect (" + std::to_string(e / cols) + "," + std::to_string(e % cols) + ") is not Hermitian";
        }
        const double lo = min_eigenvalue(m);
        v.min_eigenvalue = std::min(v.min_eigenvalue, lo);
        if (lo < -kPsdTolerance && v.valid) {
            v.valid = false;
            v.reason = "effect (" + std::to_string(e / cols) + "," + std::to_string(e % cols) +
                       ") has eigenvalue " + format_residual(lo);
        }
    }
    v.identity_residual = operator_norm(sum(effects, static_cast<std::size_t>(dim)) - Matrix::Identity(dim, dim));
    if (v.identity_residual > kSumTolerance && v.valid) {
        v.valid = false;
        v.reason = "effects sum to the identity only within " + format_residual(v.identity_residual);
    }
    return v;
}

FiniteJointPOM::FiniteJointPOM(std::size_t rows, std::size_t cols, Effects effects)
    : rows_(rows), cols_(cols), effects_(std::move(effects)) {
    const auto v = check(rows_, cols_, effects_);
    if (!v.valid) throw ConstructionError("invalid joint POM: " + v.reason);
}

std::pair<Effects, Effects> marginals(const FiniteJointPOM& pom) {
    const auto d = static_cast<Eigen::Index>(pom.dim());
    Effects m1(pom.rows(), Matrix::Zero(d, d)), m2(pom.cols(), Matrix::Zero(d, d));
    for (std::size_t i = 0; i < pom.rows(); ++i)
        for (std::size_t j = 0; j < pom.cols(); ++j) {
            m1[i] += pom(i, j);
            m2[j] += pom(i, j);
        }
    return {std::move(m1), std::move(m2)};
}

double operator_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

bool is_projective(const Effects& effects, double tol) {
    return std::all_of(effects.begin(), effects.end(),
                       [tol](const Matrix& e) { return operator_norm(e * e - e) <= tol; });
}

FiniteJointPOM make_projective_product_pom(const Effects& P, const Effects& B, bool require_commute) {
    if (P.empty() || B.empty()) throw ConstructionError("both marginals need at least one outcome");
    const auto d = P.front().rows();
    if (!is_projective(P)) throw ConstructionError("first marginal is not a family of projections");
    if (operator_norm(sum(P, d) - Matrix::Identity(d, d)) > kSumTolerance)
        throw ConstructionError("projections do not sum to the identity");
    const auto bv = FiniteJointPOM::check(1, B.size(), B);
    if (!bv.valid) throw ConstructionError("second marginal is not a POM: " + bv.reason);
    if (require_commute) {
        for (std::size_t i = 0; i < P.size(); ++i)
            for (std::size_t j = 0; j < B.size(); ++j) {
                const double c = operator_norm(P[i] * B[j] - B[j] * P[i]);
                if (c > kPsdTolerance)
                    throw ConstructionError("[P_" + std::to_string(i) + ", B_" + std::to_string(j) +
                                            "] has norm " + format_residual(c));
            }
    }
    Effects m;
    m.reserve(P.size() * B.size());
    for (const auto& p : P)
        for (const auto& b : B) {
            Matrix e = p * b * p;
            m.push_back(0.5 * (e + e.adjoint()));
        }
    return FiniteJointPOM(P.size(), B.size(), std::move(m));
}

LemmaReport verify_lemma1(const FiniteJointPOM& pom) {
    const auto [m1, m2] = marginals(pom);
    LemmaReport r;
    if (is_projective(m1))
        r.projective_marginal = 1;
    else if (is_projective(m2))
        r.projective_marginal = 2;
    else
        throw PreconditionError("neither marginal is projective; the lemma does not apply");

    for (std::size_t i = 0; i < pom.rows(); ++i)
        for (std::size_t j = 0; j < pom.cols(); ++j) {
            r.commute_residual = std::max(r.commute_residual, operator_norm(m1[i] * m2[j] - m2[j] * m1[i]));
            r.product_residual = std::max(r.product_residual, operator_norm(pom(i, j) - m1[i] * m2[j]));
        }

    // Rectangles X x Y of the finite product algebra, X and Y as bit masks.
    const auto d = static_cast<Eigen::Index>(pom.dim());
    for (std::size_t xs = 1; xs < (std::size_t{1} << pom.rows()); ++xs)
        for (std::size_t ys = 1; ys < (std::size_t{1} << pom.cols()); ++ys) {
            Matrix joint = Matrix::Zero(d, d), a = Matrix::Zero(d, d), b = Matrix::Zero(d, d);
            for (std::size_t i = 0; i < pom.rows(); ++i) {
                if (!(xs >> i & 1)) continue;
                a += m1[i];
                for (std::size_t j = 0; j < pom.cols(); ++j)
                    if (ys >> j & 1) joint += pom(i, j);
            }
            for (std::size_t j = 0; j < pom.cols(); ++j)
                if (ys >> j & 1) b += m2[j];
            r.union_commute_residual = std::max(r.union_commute_residual, operator_norm(a * b - b * a));
            r.union_product_residual = std::max(r.union_product_residual, operator_norm(joint - a * b));
        }
    r.pass = r.commute_residual <= kLemmaTolerance && r.product_residual <= kLemmaTolerance;
    return r;
}

Effects random_projective_measurement(std::size_t dim, std::size_t outcomes, std::uint64_t seed,
                                      std::uint64_t stream) {
    if (dim == 0 || outcomes == 0) throw DomainError("projective measurement needs dim, outcomes >= 1");
    CounterRng rng(seed, stream);
    const Matrix u = haar_unitary(dim, rng);
    // The first min(dim, outcomes) outcomes get one basis vector each, the
    // rest are dealt at random, then the assignment is shuffled.
    std::vector<std::size_t> owner(dim);
    for (std::size_t c = 0; c < dim; ++c) owner[c] = c < outcomes ? c : rng() % outcomes;
    for (std::size_t c = dim; c-- > 1;) std::swap(owner[c], owner[rng() % (c + 1)]);
    const auto d = static_cast<Eigen::Index>(dim);
    Effects p(outcomes, Matrix::Zero(d, d));
    for (std::size_t c = 0; c < dim; ++c) p[owner[c]] += u.col(c) * u.col(c).adjoint();
    return p;
}

Effects random_commuting_effects(const Effects& P, std::size_t outcomes, std::uint64_t seed, std::uint64_t stream) {
    if (P.empty() || outcomes == 0) throw DomainError("need at least one projection and one outcome");
    CounterRng rng(seed, stream);
    const auto d = P.front().rows();
    Effects b(outcomes, Matrix::Zero(d, d));
    for (const auto& p : P) {
        const Matrix v = range_basis(p);
        if (v.cols() == 0) continue;
        const Effects block = random_effects(static_cast<std::size_t>(v.cols()), outcomes, rng);
        for (std::size_t j = 0; j < outcomes; ++j) b[j] += v * block[j] * v.adjoint();
    }
    for (auto& m : b) m = 0.5 * (m + m.adjoint());
    return b;
}

FiniteJointPOM random_pom(std::size_t dim, std::size_t rows, std::size_t cols, std::uint64_t seed,
                          std::uint64_t stream) {
    CounterRng rng(seed, stream);
    return FiniteJointPOM(rows, cols, random_effects(dim, rows * cols, rng));
}

FiniteJointPOM random_projective_product_pom(std::size_t dim, std::size_t rows, std::size_t cols, std::uint64_t seed,
                                             std::uint64_t stream) {
    const Effects p = random_projective_measurement(dim, rows, seed, 2 * stream);
    const Effects b = random_commuting_effects(p, cols, seed, 2 * stream + 1);
    return make_projective_product_pom(p, b, true);
}

const char* to_string(AttemptOutcome outcome) {
    switch (outcome) {
    case AttemptOutcome::InvalidPom: return "invalid_pom";
    case AttemptOutcome::NoProjectiveMarginal: return "no_projective_marginal";
    case AttemptOutcome::ValidProduct: return "valid_product";
    case AttemptOutcome::Counterexample: return "counterexample";
    }
    return "unknown";
}

AdversarialReport adversarial_search(std::size_t attempts, std::uint64_t seed) {
    static const char* const kStrategies[] = {"clip_renormalize", "marginal_preserving", "off_block", "in_block"};
    AdversarialReport report;
    report.attempts = attempts;
    for (std::size_t a = 0; a < attempts; ++a) {
        // Streams 0..2*attempts-1 build the base POMs; the kicks use the rest.
        CounterRng rng(seed, 2 * attempts + a);
        const std::size_t dim = 2 + rng() % 3;
        const std::size_t rows = 2 + rng() % 3;
        const std::size_t cols = 2 + rng() % 3;
        const FiniteJointPOM base = random_projective_product_pom(dim, rows, cols, seed, a);
        const double scale = 1e-3 + 0.5 * rng.uniform();
        const std::string strategy = kStrategies[a % 4];
        const auto d = static_cast<Eigen::Index>(dim);

        Effects m = base.effects();
        if (strategy == "clip_renormalize") {
            for (auto& e : m) {
                Eigen::SelfAdjointEigenSolver<Matrix> es(e + scale * hermitian_kick(dim, rng));
                e = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().adjoint();
            }
            const Matrix w = inverse_sqrt(sum(m, dim));
            for (auto& e : m) {
                e = w * e * w;
                e = 0.5 * (e + e.adjoint());
            }
        } else {
            const auto [p, b] = marginals(base);
            for (std::size_t i = 0; i < rows; ++i) {
                Effects kick(cols);
                Matrix mean = Matrix::Zero(d, d);
                for (auto& h : kick) {
                    h = hermitian_kick(dim, rng);
                    if (strategy == "off_block") {
                        const Matrix q = Matrix::Identity(d, d) - p[i];
                        h = p[i] * h * q + q * h * p[i];
                    } else if (strategy == "in_block") {
                        h = 0.01 * p[i] * h * p[i];
                    }
                    mean += h;
                }
                mean /= static_cast<double>(cols);
                for (std::size_t j = 0; j < cols; ++j) m[i * cols + j] += scale * (kick[j] - mean);
            }
        }

        AttemptRecord rec{a, strategy, AttemptOutcome::InvalidPom, 0.0, {}};
        const auto validity = FiniteJointPOM::check(rows, cols, m);
        if (!validity.valid) {
            rec.detail = validity.reason;
        } else {
            const FiniteJointPOM pom(rows, cols, m);
            if (!is_projective(marginals(pom).first)) {
                rec.outcome = AttemptOutcome::NoProjectiveMarginal;
                rec.detail = "first marginal is no longer projective";
            } else {
                const auto lemma = verify_lemma1(pom);
                rec.product_residual = lemma.product_residual;
                rec.outcome = lemma.product_residual > kCounterexampleThreshold ? AttemptOutcome::Counterexample
                                                                                : AttemptOutcome::ValidProduct;
                rec.detail = "product residual " + format_residual(lemma.product_residual);
            }
        }
        switch (rec.outcome) {
        case AttemptOutcome::InvalidPom: ++report.invalid_pom; break;
        case AttemptOutcome::NoProjectiveMarginal: ++report.no_projective_marginal; break;
        case AttemptOutcome::ValidProduct: ++report.valid_product; break;
        case AttemptOutcome::Counterexample: ++report.counterexamples; break;
        }
        report.log.push_back(std::move(rec));
    }
    return report;
}

} // namespace pmtomo
