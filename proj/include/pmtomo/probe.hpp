#pragma once

#include <string>
#include <utility>
#include <variant>

#include "pmtomo/grid.hpp"
#include "pmtomo/hilbert.hpp"

namespace pmtomo {

/// phi_n(x) = (n/pi)^(1/4) exp(-n x^2 / 2).
struct GaussianProbe {
    double n;
};

/// phi_{a,b}(q) = (2a/pi)^(1/4) exp(-(a+ib) q^2).
struct ChirpedGaussianProbe {
    double a;
    double b;
};

/// Arbitrary probe given in the number basis.
struct NumberBasisProbe {
    StateVector state;
};

/// Probe (meter) state of a measurement scheme.
class AnalyticProbe {
  public:
    using Kind = std::variant<GaussianProbe, ChirpedGaussianProbe, NumberBasisProbe>;

    static AnalyticProbe gaussian(double n);
    static AnalyticProbe chirped(double a, double b);
    static AnalyticProbe number_basis(StateVector state);

    const Kind& kind() const { return kind_; }

    /// True for the Gaussian families, whose moments are known in closed form.
    bool closed_form_moments() const;

    double position_density(double x) const; ///< |phi(x)|^2
    double momentum_density(double p) const; ///< |phi^(p)|^2

    std::string describe() const;

  private:
    explicit AnalyticProbe(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

/// <phi|Q0^i phi> or <phi|P0^i phi>.
double probe_moment(const AnalyticProbe& probe, Axis axis, int i);

/// Central moment of order i of a centred normal distribution.
double gaussian_moment(double variance, int i);

/// Closed-form (rho_Q, rho_P) of phi_{a,b}; variances 1/(4a) and (a^2+b^2)/a.
std::pair<GridDensity, GridDensity> chirped_gaussian_densities(double a, double b, const Grid& grid);

} // namespace pmtomo
