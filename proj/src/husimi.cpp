#include "pmtomo/husimi.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pmtomo/errors.hpp"

namespace pmtomo {

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
        throw DomainError("density matrix must be square and nonempty");
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("density matrix is not Hermitian");
    if (std::abs(entries_.trace() - Complex(1.0)) > 1e-10) throw DomainError("density matrix trace is not 1");
    const Eigen::MatrixXcd herm = 0.5 * (entries_ + entries_.adjoint());
    if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm).eigenvalues().minCoeff() < -1e-10)
        throw DomainError("density matrix is not positive");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    Eigen::VectorXcd v(psi.dim());
    for (std::size_t n = 0; n < psi.dim(); ++n) v(n) = psi[n];
    return DensityMatrix(v * v.adjoint());
}

Complex DensityMatrix::operator()(std::size_t m, std::size_t n) const {
    if (m >= dim() || n >= dim()) return 0.0;
    return entries_(m, n);
}

std::vector<double> radial_nodes(double r_max, std::size_t n) {
    if (!(r_max > 0.0) || n < 2) throw DomainError("radial grid needs r_max > 0 and at least 2 nodes");
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = r_max * static_cast<double>(i) / static_cast<double>(n - 1);
    return r;
}

std::vector<double> angular_nodes(std::size_t m) {
    if (m == 0) throw DomainError("angular grid needs at least one node");
    std::vector<double> t(m);
    for (std::size_t j = 0; j < m; ++j) t[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    return t;
}

double husimi_value(const DensityMatrix& rho, Complex z) {
    const std::size_t n = rho.dim();
    Eigen::VectorXcd v(n);
    v(0) = std::exp(-0.5 * std::norm(z));
    for (std::size_t k = 1; k < n; ++k) v(k) = v(k - 1) * z / std::sqrt(static_cast<double>(k));
    return (v.adjoint() * rho.entries() * v)(0, 0).real() / std::numbers::pi;
}

double polar_mass(const PolarGrid& q) {
    const std::size_t nr = q.r.size(), nt = q.theta.size();
    std::vector<double> g(nr);
    for (std::size_t i = 0; i < nr; ++i) g[i] = q.values.row(static_cast<Eigen::Index>(i)).sum() * q.r[i];
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < nr; ++i) mass += 0.5 * (q.r[i + 1] - q.r[i]) * (g[i] + g[i + 1]);
    // Q r is odd in r and smooth, so on a uniform grid starting at 0 the
    // Euler-Maclaurin end terms at r = 0 can be taken from central differences
    // of its odd extension. With the first and third derivative terms the
    // rule is O(dr^6) there.
    const double h = nr >= 2 ? q.r[1] - q.r[0] : 0.0;
    bool uniform = nr >= 4 && q.r[0] == 0.0;
    for (std::size_t i = 1; uniform && i < nr; ++i) uniform = std::abs(q.r[i] - q.r[i - 1] - h) <= 1e-9 * h;
    if (uniform) {
        const double d1 = (g[3] - 9.0 * g[2] + 45.0 * g[1]) / (30.0 * h);
        const double d3 = (-g[3] + 8.0 * g[2] - 13.0 * g[1]) / (4.0 * h * h * h);
        mass += h * h / 12.0 * d1 - std::pow(h, 4) / 720.0 * d3;
    }
    return mass * 2.0 * std::numbers::pi / static_cast<double>(nt);
}

PolarGrid husimi_q(const DensityMatrix& rho, std::vector<double> r_nodes, std::vector<double> theta_nodes) {
    if (r_nodes.size() < 2 || theta_nodes.empty()) throw DomainError("polar grid is too small");
    PolarGrid q{std::move(r_nodes), std::move(theta_nodes), {}};
    q.values.resize(static_cast<Eigen::Index>(q.r.size()), static_cast<Eigen::Index>(q.theta.size()));
    for (std::size_t i = 0; i < q.r.size(); ++i)
        for (std::size_t j = 0; j < q.theta.size(); ++j)
            q.values(i, j) = husimi_value(rho, std::polar(q.r[i], q.theta[j]));
    const double mass = polar_mass(q);
    if (std::abs(mass - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "polar grid holds Q-function mass " << mass << "; extend r_max or add nodes";
        throw TruncationError(os.str());
    }
    return q;
}

std::vector<Complex> angular_coefficient(const PolarGrid& q, int k) {
    const std::size_t m = q.theta.size();
    const auto needed = static_cast<std::size_t>(8 * (std::abs(k) + 1));
    if (m < needed)
        throw ResolutionError("angular coefficient k=" + std::to_string(k) + " needs at least " +
                              std::to_string(needed) + " theta nodes");
    const double step = 2.0 * std::numbers::pi / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j)
        if (std::abs(q.theta[j] - q.theta[0] - step * static_cast<double>(j)) > 1e-12)
            throw ResolutionError("theta nodes must be uniform and periodic");

    std::vector<Complex> f(q.r.size());
    for (std::size_t i = 0; i < q.r.size(); ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += std::polar(1.0, -k * q.theta[j]) * q.values(i, j);
        f[i] = 0.5 * std::exp(q.r[i] * q.r[i]) * s * step;
    }
    return f;
}

Complex reconstruct_element(const PolarGrid& q, int n, int k, const ReconstructionOptions& options) {
    if (n < 0 || n + k < 0) throw DomainError("matrix element index out of range");
    const int order = 2 * n + k;
    if (order > options.derivative_ceiling)
        throw DomainError("derivative order " + std::to_string(order) + " exceeds the ceiling " +
                          std::to_string(options.derivative_ceiling));
    const int lowest = std::abs(k);
    const int terms = (options.derivative_ceiling + 2 - lowest) / 2 + 1;

    const auto f = angular_coefficient(q, k);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < q.r.size(); ++i)
        if (q.r[i] <= options.r_fit + 1e-12) rows.push_back(i);
    if (rows.size() < static_cast<std::size_t>(2 * terms))
        throw ResolutionError("too few radial nodes inside the fit interval");

    const double scale = options.r_fit;
    Eigen::MatrixXd A(rows.size(), terms);
    Eigen::MatrixXcd b(rows.size(), 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double u = q.r[rows[i]] / scale;
        for (int j = 0; j < terms; ++j) A(i, j) = std::pow(u, lowest + 2 * j);
        b(i, 0) = f[rows[i]];
    }
    const auto qr = A.colPivHouseholderQr();
    const Eigen::MatrixXd re = qr.solve(b.real().eval());
    const Eigen::MatrixXd im = qr.solve(b.imag().eval());
    const double residual = std::max((A * re - b.real()).cwiseAbs().maxCoeff(), (A * im - b.imag()).cwiseAbs().maxCoeff());
    if (residual > options.max_residual) {
        std::ostringstream os;
        os << "radial fit residual " << residual << " exceeds " << options.max_residual
           << "; the derivative estimate is unreliable";
        throw UnreliableDerivativeError(os.str());
    }
    const int j = (order - lowest) / 2;
    const Complex coeff = Complex(re(j, 0), im(j, 0)) / std::pow(scale, order);
    return std::sqrt(std::tgamma(n + k + 1.0) * std::tgamma(n + 1.0)) * coeff;
}

} // namespace pmtomo
