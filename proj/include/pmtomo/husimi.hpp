#pragma once

// Husimi Q-function of a state and its inversion to number-basis matrix
// elements through the radial derivatives of the angular Fourier coefficients.

#include <vector>

#include <Eigen/Dense>

#include "pmtomo/grid.hpp"
#include "pmtomo/hilbert.hpp"

namespace pmtomo {

class DensityMatrix {
  public:
    /// Validates Hermiticity (1e-12), positivity (eigenvalues >= -1e-10) and
    /// unit trace (1e-10).
    explicit DensityMatrix(Eigen::MatrixXcd entries);
    static DensityMatrix pure(const StateVector& psi);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    Complex operator()(std::size_t m, std::size_t n) const;

  private:
    Eigen::MatrixXcd entries_;
};

/// Q values on a polar grid: values(i, j) = Q(r_i e^{i theta_j}).
struct PolarGrid {
    std::vector<double> r;
    std::vector<double> theta;
    Eigen::MatrixXd values;
};

/// n uniform nodes on [0, r_max].
std::vector<double> radial_nodes(double r_max, std::size_t n);
/// m uniform nodes on [0, 2 pi), endpoint excluded.
std::vector<double> angular_nodes(std::size_t m);

/// Q(z) = <z|rho|z>/pi with z = (q + ip)/sqrt(2). Throws TruncationError when
/// the polar-grid mass differs from 1 by more than 1e-6 (r_max too small).
PolarGrid husimi_q(const DensityMatrix& rho, std::vector<double> r_nodes, std::vector<double> theta_nodes);

/// Q at a single phase-space point.
double husimi_value(const DensityMatrix& rho, Complex z);

/// Integral of Q r dr dtheta: trapezoid in theta, end-corrected trapezoid in r.
double polar_mass(const PolarGrid& q);

/// f_k(r) = (1/2) e^{r^2} int_0^{2pi} e^{-ik theta} Q(r e^{i theta}) dtheta on
/// the radial nodes. Needs a uniform periodic theta grid with at least
/// 8(|k|+1) nodes, otherwise ResolutionError.
std::vector<Complex> angular_coefficient(const PolarGrid& q, int k);

struct ReconstructionOptions {
    double r_fit = 1.5;
    int derivative_ceiling = 10;
    double max_residual = 1e-6;
};

/// rho_{n,n+k} = sqrt((n+k)! n!) / (2n+k)! * f_k^{(2n+k)}(0), with the
/// derivative read off a parity-constrained least-squares polynomial fit of
/// f_k on [0, r_fit]. k may be negative (n+k >= 0).
Complex reconstruct_element(const PolarGrid& q, int n, int k, const ReconstructionOptions& options = {});

} // namespace pmtomo
