#pragma once

// Single-mode states in a truncated number (Hermite) basis.
//
// Units are fixed throughout the library: hbar = 1, Q = (a + a*)/sqrt(2),
// P = i(a* - a)/sqrt(2), and the Fourier transform is
// psi^(p) = (2 pi)^(-1/2) int exp(-ipq) psi(q) dq.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pmtomo/grid.hpp"

namespace pmtomo {

enum class Axis { Q, P };

const char* to_string(Axis axis);

/// Highest moment order exact_moment accepts.
inline constexpr int kMaxMomentOrder = 64;

/// Pure state psi = sum_n c_n |n>, unit norm within 1e-12.
class StateVector {
  public:
    explicit StateVector(std::vector<Complex> coeffs);

    /// Rescales to unit norm; throws DomainError on an empty or zero vector.
    static StateVector normalized(std::vector<Complex> coeffs);
    static StateVector number(std::size_t n, std::size_t dim = 0);
    /// Coherent state |z>, truncated to `dim` levels. Throws TruncationError
    /// when the discarded weight exceeds 1e-14.
    static StateVector coherent(Complex z, std::size_t dim);
    /// (2a/pi)^(1/4) exp(-(a+ib) q^2) expanded in the number basis; only even
    /// levels are populated. Throws TruncationError when `dim` is too small.
    static StateVector chirped_gaussian(double a, double b, std::size_t dim);

    std::size_t dim() const { return coeffs_.size(); }
    std::span<const Complex> coeffs() const { return coeffs_; }
    Complex operator[](std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : Complex{}; }

    StateVector padded(std::size_t dim) const;
    /// Coefficient-wise complex conjugate; equals the coordinate conjugation
    /// (C psi)(q) = conj(psi(q)) because the Hermite functions are real.
    StateVector conjugated() const;
    /// psi(-q), i.e. c_n -> (-1)^n c_n.
    StateVector reflected() const;

    Complex inner(const StateVector& other) const; ///< <this|other>

  private:
    std::vector<Complex> coeffs_;
};

/// c_n -> (-i)^n c_n.
StateVector fourier_transform(const StateVector& state);

/// Orthonormal Hermite functions h_0..h_{count-1} at q. The upward recurrence
/// is rescaled on the fly so large orders and |q| neither overflow nor underflow.
std::vector<double> hermite_functions(double q, std::size_t count);

Complex wavefunction_at(const StateVector& state, double q);

/// psi on `grid`. Throws ResolutionError if dx > pi / p_max with
/// p_max = sqrt(2N) + 6, and GridError if the grid misses the classical
/// turning region [-(sqrt(2N)+4), sqrt(2N)+4].
GridFunction hermite_wavefunction(const StateVector& state, const Grid& grid);

GridDensity position_density(const StateVector& state, const Grid& grid);
GridDensity momentum_density(const StateVector& state, const Grid& grid);

/// <psi|Q_theta^k psi> with Q_theta = cos(theta) Q + sin(theta) P. The ket is
/// carried in a basis of size N + k, so the result is exact up to roundoff.
double quadrature_moment(const StateVector& state, double theta, int k);

/// <psi|Q^k psi> or <psi|P^k psi>.
double exact_moment(const StateVector& state, Axis axis, int k);

double variance(const StateVector& state, Axis axis);
double mean_photon_number(const StateVector& state);

/// Dense ladder matrices in a basis of size dim.
namespace ladder {
Eigen::MatrixXcd annihilation(std::size_t dim);
Eigen::MatrixXcd creation(std::size_t dim);
Eigen::MatrixXcd number(std::size_t dim);
Eigen::MatrixXcd position(std::size_t dim);
Eigen::MatrixXcd momentum(std::size_t dim);
} // namespace ladder

} // namespace pmtomo
