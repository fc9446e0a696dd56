#pragma once

// Direct inversion of the measured convolution f * rho, as a cross-check on
// the method of moments.

#include <vector>

#include "pmtomo/errors.hpp"
#include "pmtomo/grid.hpp"

namespace pmtomo {

inline constexpr double kDefaultDeconvEps = 1e-8;
inline constexpr int kDefaultDifferentialOrder = 20;
inline constexpr int kMaxDifferentialOrder = 30;

struct FourierDeconvolution {
    GridDensity density;            ///< clipped and renormalised
    std::vector<double> unclipped;  ///< raw inverse transform on the grid
    double floored_fraction = 0.0;  ///< share of the retained band hit by the eps floor
};

/// rho^ = (f*rho)^ / f^, where bins with |f^| < eps are divided by eps with
/// the phase of f^ instead. The kernel is any density on a grid with the same
/// spacing and a node at the origin. Throws IllPosedError when the floor
/// applies on more than half of the band where the measured transform is
/// above roundoff.
FourierDeconvolution fourier_deconvolve_full(const GridDensity& measured, const GridDensity& kernel,
                                            double eps = kDefaultDeconvEps);

GridDensity fourier_deconvolve(const GridDensity& measured, const GridDensity& kernel,
                               double eps = kDefaultDeconvEps);

/// Raised when the differential series stops converging; carries the last
/// partial sum before the term norms started to grow.
class DivergenceError : public Error {
  public:
    DivergenceError(const std::string& what, GridDensity last_stable, int last_order)
        : Error("divergence", what), last_stable_(std::move(last_stable)), last_order_(last_order) {}

    const GridDensity& last_stable() const { return last_stable_; }
    int last_order() const { return last_order_; }

  private:
    GridDensity last_stable_;
    int last_order_;
};

struct DifferentialDeconvolution {
    GridDensity density;
    std::vector<double> unclipped;
    std::vector<double> term_norms; ///< L1 norm of each series term
};

/// rho(x) = sum_{k<=order} (-1/4)^k / k! d^{2k}/dx^{2k} (f*rho)(x) for the
/// vacuum kernel f(x) = exp(-x^2)/sqrt(pi). Derivatives are spectral and
/// restricted to the band where the measured transform exceeds
/// kSpectralBandFloor of its peak.
DifferentialDeconvolution gaussian_differential_deconvolve_full(const GridDensity& measured,
                                                                int order = kDefaultDifferentialOrder);

GridDensity gaussian_differential_deconvolve(const GridDensity& measured, int order = kDefaultDifferentialOrder);

inline constexpr double kSpectralBandFloor = 1e-13;

} // namespace pmtomo
