#include "pmtomo/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pmtomo/errors.hpp"

namespace pmtomo {

Eigen::MatrixXd recovery_matrix(const CoefficientTable& table, Axis axis, int K) {
    if (K > table.k_max) throw TableError("coefficient table stops at order " + std::to_string(table.k_max));
    const auto& s = table.rows(axis);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(K + 1, K + 1);
    for (int k = 0; k <= K; ++k)
        for (int j = 0; j <= k; ++j) S(k, j) = s[k][k - j];
    return S.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(K + 1, K + 1));
}

MomentSequence recover_moments(const MomentSequence& measured, const CoefficientTable& table, Axis axis) {
    const int K = measured.K();
    if (K < 0) throw InvalidMomentsError("empty moment sequence");
    if (K > table.k_max)
        throw TableError("measured moments go to order " + std::to_string(K) + " but the table stops at " +
                         std::to_string(table.k_max));
    if (std::abs(measured.m[0] - 1.0) > 1e-12) throw InvalidMomentsError("m_0 must equal 1");

    const auto& s = table.rows(axis);
    MomentSequence out;
    out.m.assign(K + 1, 0.0);
    out.m[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
        double r = measured.m[k];
        for (int i = 1; i <= k; ++i) r -= s[k][i] * out.m[k - i];
        out.m[k] = r;
    }
    out.above_reliability_ceiling = measured.above_reliability_ceiling;

    if (measured.covariance.rows() == K + 1 && measured.covariance.cols() == K + 1) {
        const Eigen::MatrixXd L = recovery_matrix(table, axis, K);
        out.covariance = L * measured.covariance * L.transpose();
        out.se.resize(K + 1);
        for (int k = 0; k <= K; ++k) out.se[k] = std::sqrt(std::max(0.0, out.covariance(k, k)));
    } else if (measured.has_errors()) {
        const Eigen::MatrixXd L = recovery_matrix(table, axis, K);
        out.se.assign(K + 1, 0.0);
        for (int k = 0; k <= K; ++k)
            for (int j = 0; j <= k; ++j) out.se[k] += std::abs(L(k, j)) * measured.se[j];
    }
    return out;
}

HankelCheck hankel_check(const MomentSequence& moments, double tolerance) {
    const int n = moments.K() / 2 + 1;
    Eigen::MatrixXd H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = moments.m[i + j];
    Eigen::VectorXd scale(n);
    for (int i = 0; i < n; ++i) scale(i) = H(i, i) > 0.0 ? 1.0 / std::sqrt(H(i, i)) : 1.0;
    const Eigen::MatrixXd Hs = scale.asDiagonal() * H * scale.asDiagonal();
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hs).eigenvalues().minCoeff();
    return {min_eig >= -tolerance, min_eig};
}

DeterminacyVerdict determinacy_check(const MomentSequence& moments) {
    const int K = moments.K();
    if (K < 6) throw PreconditionError("determinacy check needs moments up to order 6 at least");
    std::vector<double> ks, ys;
    for (int k = 0; k <= K; k += 2) {
        const double m = moments.m[k];
        if (m < -1e-12) throw InvalidMomentsError("even moment m_" + std::to_string(k) + " is negative");
        if (m <= 1e-12) continue;
        ks.push_back(k);
        ys.push_back(std::log(m) - std::lgamma(k + 1.0));
    }

    DeterminacyVerdict v;
    const std::size_t n = ks.size();
    if (n < 3) {
        // Degenerate (point-mass-like) sequence: trivially bounded.
        v.bounded = true;
        v.C = n == 0 ? 0.0 : std::exp(*std::max_element(ys.begin(), ys.end()));
        v.R = 0.0;
        v.max_violation = -kEnvelopeTolerance;
        return v;
    }
    const std::size_t held = std::max<std::size_t>(1, n / 3);
    const std::size_t fit = n - held;

    double slope = 0.0, intercept = 0.0;
    {
        double sk = 0, sy = 0, skk = 0, sky = 0;
        for (std::size_t i = 0; i < fit; ++i) {
            sk += ks[i];
            sy += ys[i];
            skk += ks[i] * ks[i];
            sky += ks[i] * ys[i];
        }
        const double f = static_cast<double>(fit);
        slope = (f * sky - sk * sy) / (f * skk - sk * sk);
        intercept = (sy - slope * sk) / f;
    }
    double lift = 0.0;
    for (std::size_t i = 0; i < fit; ++i) lift = std::max(lift, ys[i] - (intercept + slope * ks[i]));
    intercept += lift;

    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = fit; i < n; ++i) worst = std::max(worst, ys[i] - (intercept + slope * ks[i]));

    v.C = std::exp(intercept);
    v.R = std::exp(slope);
    v.max_violation = worst - kEnvelopeTolerance;
    v.bounded = v.max_violation <= 0.0;
    return v;
}

std::vector<double> gram_charlier_values(const MomentSequence& moments, const Grid& grid) {
    const int K = moments.K();
    const auto& m = moments.m;
    const double mu = m[1];
    const double var = m[2] - mu * mu;
    if (!(var > 0.0)) throw InvalidMomentsError("moment sequence has no positive variance");
    const double sd = std::sqrt(var);

    // Standardised moments E[Z^j], Z = (X - mu)/sd.
    std::vector<double> z_moment(K + 1, 0.0);
    for (int j = 0; j <= K; ++j) {
        double acc = 0.0;
        for (int l = 0; l <= j; ++l) acc += static_cast<double>(binomial(j, l)) * m[l] * std::pow(-mu, j - l);
        z_moment[j] = acc / std::pow(sd, j);
    }
    // Probabilists' Hermite coefficients: He_{j+1} = z He_j - j He_{j-1}.
    std::vector<std::vector<double>> he(K + 1, std::vector<double>(K + 1, 0.0));
    he[0][0] = 1.0;
    if (K >= 1) he[1][1] = 1.0;
    for (int j = 1; j < K; ++j)
        for (int l = 0; l <= j + 1; ++l) {
            double c = l >= 1 ? he[j][l - 1] : 0.0;
            c -= j * he[j - 1][l];
            he[j + 1][l] = c;
        }
    std::vector<double> coef(K + 1, 0.0); // c_j / j!
    for (int j = 0; j <= K; ++j) {
        double c = 0.0;
        for (int l = 0; l <= j; ++l) c += he[j][l] * z_moment[l];
        coef[j] = c / std::tgamma(j + 1.0);
    }

    std::vector<double> out(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double z = (grid.at(i) - mu) / sd;
        double h_prev = 1.0, h = z, series = coef[0];
        if (K >= 1) series += coef[1] * z;
        for (int j = 1; j < K; ++j) {
            const double next = z * h - j * h_prev;
            h_prev = h;
            h = next;
            series += coef[j + 1] * h;
        }
        out[i] = std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi)) * series;
    }
    return out;
}

GridDensity density_from_moments(const MomentSequence& moments, const Grid& grid) {
    const int K = moments.K();
    if (K % 2 != 0 || K < 6 || K > kEmpiricalMomentCeiling)
        throw DomainError("density reconstruction needs an even K with 6 <= K <= 12");
    if (!hankel_check(moments).positive_semidefinite)
        throw InvalidMomentsError("Hankel matrix of the moments is indefinite");
    if (!determinacy_check(moments).bounded)
        throw InvalidMomentsError("moment sequence fails the exponential-boundedness check");
    auto values = gram_charlier_values(moments, grid);
    for (double& v : values) v = std::max(v, 0.0);
    return GridDensity::normalized(grid, std::move(values));
}

} // namespace pmtomo
