#pragma once

// Finite-outcome joint observables on C^d. Checks by brute force that a
// joint POM with one projective marginal is the product of its commuting
// marginals.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pmtomo {

using Effects = std::vector<Eigen::MatrixXcd>;

struct PomValidity {
    bool valid = true;
    std::string reason; ///< empty when valid
    double min_eigenvalue = 0.0;
    double identity_residual = 0.0;
};

/// Effects M(i, j), i < rows, j < cols, on C^dim.
class FiniteJointPOM {
  public:
    /// Throws ConstructionError unless every effect is Hermitian and PSD
    /// within 1e-12 and the effects sum to the identity within 1e-10.
    FiniteJointPOM(std::size_t rows, std::size_t cols, Effects effects);
    /// Same checks without throwing.
    static PomValidity check(std::size_t rows, std::size_t cols, const Effects& effects);

    std::size_t dim() const { return static_cast<std::size_t>(effects_.front().rows()); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Eigen::MatrixXcd& operator()(std::size_t i, std::size_t j) const { return effects_[i * cols_ + j]; }
    const Effects& effects() const { return effects_; }

  private:
    std::size_t rows_;
    std::size_t cols_;
    Effects effects_;
};

/// Row sums M1(i) and column sums M2(j).
std::pair<Effects, Effects> marginals(const FiniteJointPOM& pom);

/// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& a);

/// Every effect satisfies ||E^2 - E|| <= tol.
bool is_projective(const Effects& effects, double tol = 1e-10);

/// M(i, j) = P_i B_j P_i. With require_commute, throws ConstructionError if
/// some [P_i, B_j] exceeds 1e-12 in norm. Throws ConstructionError as well
/// when P is not a projective resolution of the identity or B not a POM.
FiniteJointPOM make_projective_product_pom(const Effects& P, const Effects& B, bool require_commute = true);

struct LemmaReport {
    int projective_marginal = 0; ///< 1 or 2; 1 when both are projective
    double commute_residual = 0.0;
    double product_residual = 0.0;
    /// Same residuals over all rectangles X x Y with X, Y nonempty index sets.
    double union_commute_residual = 0.0;
    double union_product_residual = 0.0;
    bool pass = false;
};

inline constexpr double kLemmaTolerance = 1e-9;

/// Throws PreconditionError when neither marginal is projective.
LemmaReport verify_lemma1(const FiniteJointPOM& pom);

// Random constructions, driven by CounterRng(seed, stream).

/// Projective measurement with `outcomes` projections (some may be zero)
/// in a Haar-random basis.
Effects random_projective_measurement(std::size_t dim, std::size_t outcomes, std::uint64_t seed,
                                      std::uint64_t stream);
/// Random POM with `outcomes` effects, block diagonal in the ranges of P so
/// that every effect commutes with every P_i.
Effects random_commuting_effects(const Effects& P, std::size_t outcomes, std::uint64_t seed, std::uint64_t stream);
/// Generic random POM with full-rank effects (neither marginal projective).
FiniteJointPOM random_pom(std::size_t dim, std::size_t rows, std::size_t cols, std::uint64_t seed,
                          std::uint64_t stream);
FiniteJointPOM random_projective_product_pom(std::size_t dim, std::size_t rows, std::size_t cols, std::uint64_t seed,
                                             std::uint64_t stream);

/// Outcome of one adversarial attempt.
enum class AttemptOutcome { InvalidPom, NoProjectiveMarginal, ValidProduct, Counterexample };
const char* to_string(AttemptOutcome outcome);

struct AttemptRecord {
    std::size_t index;
    std::string strategy;
    AttemptOutcome outcome;
    double product_residual; ///< only meaningful for valid POMs with a projective marginal
    std::string detail;
};

struct AdversarialReport {
    std::size_t attempts = 0;
    std::size_t invalid_pom = 0;
    std::size_t no_projective_marginal = 0;
    std::size_t valid_product = 0;
    std::size_t counterexamples = 0;
    std::vector<AttemptRecord> log;
};

/// Perturbs projective product POMs so as to break the product form while
/// trying to keep the POM invariants, cycling over four strategies:
///   clip_renormalize     random Hermitian kick, clip negative eigenvalues,
///                        restore the identity sum by S^-1/2 M S^-1/2;
///   marginal_preserving  kick with row sums zero, so M1 stays projective;
///   off_block            row-sum-zero kick coupling range(P_i) to its complement;
///   in_block             small row-sum-zero kick inside range(P_i).
/// A counterexample is a valid POM with projective first marginal and
/// product residual above 1e-6. Every attempt is logged.
AdversarialReport adversarial_search(std::size_t attempts, std::uint64_t seed);

} // namespace pmtomo
