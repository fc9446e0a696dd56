#pragma once

// Method of moments: undo the measurement smearing order by order.

#include <string>

#include <Eigen/Dense>

#include "pmtomo/grid.hpp"
#include "pmtomo/hilbert.hpp"
#include "pmtomo/models.hpp"
#include "pmtomo/sampling.hpp"

namespace pmtomo {

/// Sharp moments from measured ones:
///     r_k = m_k - sum_{i=1..k} s[k][i] r_{k-i},   r_0 = m_0 = 1.
/// Uncertainties propagate linearly. With a covariance attached to
/// `measured`, se(r) comes from L Cov L^T (L the unit lower-triangular
/// inverse of the table); otherwise se(r_k) = sum_j |L_kj| se(m_j), which
/// bounds the error for any correlation between the m_j.
MomentSequence recover_moments(const MomentSequence& measured, const CoefficientTable& table, Axis axis);

/// L with r = L m. Unit lower triangular.
Eigen::MatrixXd recovery_matrix(const CoefficientTable& table, Axis axis, int K);

struct HankelCheck {
    bool positive_semidefinite;
    double min_eigenvalue; ///< of the Hankel matrix scaled to unit diagonal
};

/// Positivity of H_ij = m_{i+j}, 0 <= i, j <= K/2.
HankelCheck hankel_check(const MomentSequence& moments, double tolerance = 1e-8);

/// Envelope fit of log|m_k| <= log C + k log R + log k! over even k.
///
/// The envelope slope is a least-squares fit to the leading even orders, the
/// intercept is raised until those orders lie under it, and the remaining
/// (highest) orders are tested against the extrapolated envelope.
/// `max_violation` is the largest excess over the envelope minus the
/// 0.1 (log-scale) tolerance, so bounded <=> max_violation <= 0.
///
/// Finitely many moments cannot prove determinacy; this is a heuristic.
struct DeterminacyVerdict {
    bool bounded = false;
    double C = 0.0;
    double R = 0.0;
    double max_violation = 0.0;
    std::string method = "heuristic envelope fit (not a proof of determinacy)";
};

inline constexpr double kEnvelopeTolerance = 0.1;

/// Needs K >= 6; throws InvalidMomentsError when an even moment is negative.
DeterminacyVerdict determinacy_check(const MomentSequence& moments);

/// Gram-Charlier reconstruction: Gaussian with the sequence's mean and
/// variance, times sum_j c_j He_j(z)/j! with c_j matching the moments up to K.
/// Negative lobes are clipped and the result renormalised.
GridDensity density_from_moments(const MomentSequence& moments, const Grid& grid);

/// The expansion before clipping and renormalisation.
std::vector<double> gram_charlier_values(const MomentSequence& moments, const Grid& grid);

} // namespace pmtomo
