#include "pmtomo/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pmtomo/errors.hpp"

namespace pmtomo {

namespace {

constexpr double kNormTolerance = 1e-12;

double norm_squared(std::span<const Complex> c) {
    double s = 0.0;
    for (const auto& x : c) s += std::norm(x);
    return s;
}

// One application of Q_theta = (e^{-i theta} a + e^{i theta} a*)/sqrt(2);
// the result has one more level than the input.
std::vector<Complex> apply_quadrature(const std::vector<Complex>& v, Complex down, Complex up) {
    const std::size_t n = v.size();
    std::vector<Complex> out(n + 1, 0.0);
    for (std::size_t m = 0; m <= n; ++m) {
        Complex acc = 0.0;
        if (m + 1 < n) acc += down * std::sqrt(static_cast<double>(m + 1)) * v[m + 1];
        if (m >= 1 && m - 1 < n) acc += up * std::sqrt(static_cast<double>(m)) * v[m - 1];
        out[m] = acc / std::numbers::sqrt2;
    }
    return out;
}

} // namespace

const char* to_string(Axis axis) { return axis == Axis::Q ? "Q" : "P"; }

StateVector::StateVector(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw DomainError("state vector needs at least one level");
    const double n2 = norm_squared(coeffs_);
    if (std::abs(n2 - 1.0) > kNormTolerance)
        throw DomainError("state vector is not normalised (norm^2 = " + std::to_string(n2) + ")");
}

StateVector StateVector::normalized(std::vector<Complex> coeffs) {
    const double n2 = coeffs.empty() ? 0.0 : norm_squared(coeffs);
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw DomainError("cannot normalise a zero state vector");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& c : coeffs) c *= s;
    return StateVector(std::move(coeffs));
}

StateVector StateVector::number(std::size_t n, std::size_t dim) {
    std::vector<Complex> c(std::max(dim, n + 1), 0.0);
    c[n] = 1.0;
    return StateVector(std::move(c));
}

StateVector StateVector::coherent(Complex z, std::size_t dim) {
    if (dim == 0) throw DomainError("coherent state needs dim >= 1");
    std::vector<Complex> c(dim);
    c[0] = std::exp(-0.5 * std::norm(z));
    for (std::size_t n = 1; n < dim; ++n) c[n] = c[n - 1] * z / std::sqrt(static_cast<double>(n));
    const double kept = norm_squared(c);
    if (1.0 - kept > 1e-14)
        throw TruncationError("coherent state |z|=" + std::to_string(std::abs(z)) +
                              " needs more than " + std::to_string(dim) + " levels");
    return normalized(std::move(c));
}

StateVector StateVector::chirped_gaussian(double a, double b, std::size_t dim) {
    if (!(a > 0.0)) throw DomainError("chirped Gaussian needs a > 0");
    if (dim == 0) throw DomainError("chirped Gaussian needs dim >= 1");
    // exp(-alpha q^2/2) with alpha = 2(a+ib) is a squeezed vacuum
    // exp(t a*^2 / 2)|0> (up to normalisation) with t = (1-alpha)/(1+alpha).
    const Complex alpha = 2.0 * Complex(a, b);
    const Complex t = (1.0 - alpha) / (1.0 + alpha);
    std::vector<Complex> c(dim, 0.0);
    c[0] = std::pow(2.0 * a, 0.25) / std::sqrt(Complex(a + 0.5, b));
    for (std::size_t m = 0; 2 * m + 2 < dim; ++m) {
        const double twom = static_cast<double>(2 * m);
        c[2 * m + 2] = c[2 * m] * (t / 2.0) * std::sqrt((twom + 1.0) * (twom + 2.0)) /
                       static_cast<double>(m + 1);
    }
    const double kept = norm_squared(c);
    if (std::abs(1.0 - kept) > 1e-12)
        throw TruncationError("chirped Gaussian (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                              ") needs more than " + std::to_string(dim) + " levels");
    return normalized(std::move(c));
}

StateVector StateVector::padded(std::size_t dim) const {
    if (dim <= coeffs_.size()) return *this;
    auto c = coeffs_;
    c.resize(dim, 0.0);
    return StateVector(std::move(c));
}

StateVector StateVector::conjugated() const {
    auto c = coeffs_;
    for (auto& x : c) x = std::conj(x);
    return StateVector(std::move(c));
}

StateVector StateVector::reflected() const {
    auto c = coeffs_;
    for (std::size_t n = 1; n < c.size(); n += 2) c[n] = -c[n];
    return StateVector(std::move(c));
}

Complex StateVector::inner(const StateVector& other) const {
    Complex s = 0.0;
    const std::size_t n = std::min(dim(), other.dim());
    for (std::size_t i = 0; i < n; ++i) s += std::conj(coeffs_[i]) * other.coeffs_[i];
    return s;
}

StateVector fourier_transform(const StateVector& state) {
    std::vector<Complex> c(state.coeffs().begin(), state.coeffs().end());
    static constexpr Complex phases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    for (std::size_t n = 0; n < c.size(); ++n) c[n] *= phases[n % 4];
    return StateVector(std::move(c));
}

std::vector<double> hermite_functions(double q, std::size_t count) {
    std::vector<double> h(count, 0.0);
    if (count == 0) return h;
    constexpr double kBig = 1e150;
    const double log_big = std::log(kBig);
    const double base = -0.5 * q * q - 0.25 * std::log(std::numbers::pi);
    double log_scale = 0.0;
    double prev = 0.0;
    double cur = 1.0; // h_0 / exp(base)
    h[0] = std::exp(base);
    for (std::size_t n = 0; n + 1 < count; ++n) {
        const double nd = static_cast<double>(n);
        const double next = std::sqrt(2.0 / (nd + 1.0)) * q * cur - std::sqrt(nd / (nd + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            log_scale += log_big;
        }
        h[n + 1] = cur == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(cur)) + log_scale + base), cur);
    }
    return h;
}

Complex wavefunction_at(const StateVector& state, double q) {
    const auto h = hermite_functions(q, state.dim());
    Complex s = 0.0;
    for (std::size_t n = 0; n < state.dim(); ++n) s += state[n] * h[n];
    return s;
}

GridFunction hermite_wavefunction(const StateVector& state, const Grid& grid) {
    const double turning = std::sqrt(2.0 * static_cast<double>(state.dim()));
    const double p_max = turning + 6.0;
    if (grid.dx > std::numbers::pi / p_max)
        throw ResolutionError("grid spacing " + std::to_string(grid.dx) + " cannot resolve momenta up to " +
                              std::to_string(p_max));
    const double cover = turning + 4.0;
    if (grid.x0 > -cover || grid.back() < cover)
        throw GridError("grid does not cover [-" + std::to_string(cover) + ", " + std::to_string(cover) + "]");
    GridFunction out{grid, std::vector<Complex>(grid.points)};
    for (std::size_t i = 0; i < grid.points; ++i) out.values[i] = wavefunction_at(state, grid.at(i));
    return out;
}

GridDensity position_density(const StateVector& state, const Grid& grid) {
    const auto psi = hermite_wavefunction(state, grid);
    std::vector<double> rho(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) rho[i] = std::norm(psi.values[i]);
    const double mass = trapezoid(grid, rho);
    if (std::abs(mass - 1.0) > 1e-6)
        throw GridError("grid captures only " + std::to_string(mass) + " of the probability mass");
    return GridDensity::normalized(grid, std::move(rho));
}

GridDensity momentum_density(const StateVector& state, const Grid& grid) {
    return position_density(fourier_transform(state), grid);
}

double quadrature_moment(const StateVector& state, double theta, int k) {
    if (k < 0) throw DomainError("moment order must be nonnegative");
    if (k > kMaxMomentOrder)
        throw DomainError("moment order " + std::to_string(k) + " exceeds " + std::to_string(kMaxMomentOrder));
    const Complex down = std::polar(1.0, -theta);
    const Complex up = std::polar(1.0, theta);
    std::vector<Complex> right(state.coeffs().begin(), state.coeffs().end());
    std::vector<Complex> left = right;
    const int half = k / 2;
    for (int i = 0; i < half; ++i) left = apply_quadrature(left, down, up);
    for (int i = 0; i < k - half; ++i) right = apply_quadrature(right, down, up);
    Complex s = 0.0;
    for (std::size_t n = 0; n < std::min(left.size(), right.size()); ++n) s += std::conj(left[n]) * right[n];
    return s.real();
}

double exact_moment(const StateVector& state, Axis axis, int k) {
    return quadrature_moment(state, axis == Axis::Q ? 0.0 : std::numbers::pi / 2.0, k);
}

double variance(const StateVector& state, Axis axis) {
    const double m1 = exact_moment(state, axis, 1);
    return exact_moment(state, axis, 2) - m1 * m1;
}

double mean_photon_number(const StateVector& state) {
    double s = 0.0;
    for (std::size_t n = 0; n < state.dim(); ++n) s += static_cast<double>(n) * std::norm(state[n]);
    return s;
}

namespace ladder {

Eigen::MatrixXcd annihilation(std::size_t dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Eigen::MatrixXcd creation(std::size_t dim) { return annihilation(dim).adjoint(); }

Eigen::MatrixXcd number(std::size_t dim) { return creation(dim) * annihilation(dim); }

Eigen::MatrixXcd position(std::size_t dim) {
    return (annihilation(dim) + creation(dim)) / std::numbers::sqrt2;
}

Eigen::MatrixXcd momentum(std::size_t dim) {
    return Complex(0.0, 1.0) * (creation(dim) - annihilation(dim)) / std::numbers::sqrt2;
}

} // namespace ladder

} // namespace pmtomo
