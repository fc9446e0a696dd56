#pragma once

// The three joint position-momentum measurement schemes, each described by
// the covariant phase-space observable it measures, plus balanced homodyne
// detection at finite reference amplitude.
//
// Every convolution model is summarised by two detector kernels f, g: the
// densities of the additive outcome noise, so that the measured marginal
// densities are f * rho_Q and g * rho_P, and by the coefficient table of the
// moment polynomials
//     <G1[k]> = sum_i sQ[k][i] <Q^(k-i)>,   <G2[k]> = sum_i sP[k][i] <P^(k-i)>,
// where sQ[k][i] = C(k,i) * (i-th moment of f), and likewise for g.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pmtomo/grid.hpp"
#include "pmtomo/hilbert.hpp"
#include "pmtomo/probe.hpp"

namespace pmtomo {

/// Positive trace-one operator T = sum_i t_i |eta_i><eta_i|.
class GeneratingOperator {
  public:
    struct Component {
        double weight;
        StateVector vector;
    };

    /// Validates t_i > 0, sum t_i = 1 and orthonormality within 1e-10.
    explicit GeneratingOperator(std::vector<Component> spectrum);
    static GeneratingOperator pure(StateVector eta);
    static GeneratingOperator vacuum();

    const std::vector<Component>& spectrum() const { return spectrum_; }

    /// C T C^-1 for the coordinate conjugation C.
    GeneratingOperator conjugated() const;

    /// Tr[T Q^k] or Tr[T P^k].
    double trace_moment(Axis axis, int k) const;

  private:
    std::vector<Component> spectrum_;
};

/// von Neumann position measurement with coupling lambda followed by a sharp
/// momentum measurement.
struct SequentialVN {
    double lambda;
    AnalyticProbe probe;
};

/// Simultaneous position and momentum couplings lambda, mu with probes phi1, phi2.
struct ArthursKelly {
    double lambda;
    double mu;
    AnalyticProbe probe1;
    AnalyticProbe probe2;
};

/// Eight-port homodyne detector in the strong-reference limit with phase
/// shift pi/2: measures G^T with T = C sigma C^-1, sigma the parameter-mode state.
struct EightPort {
    GeneratingOperator sigma;
};

/// Balanced homodyne detector with reference amplitude z = r e^{i theta}.
struct BalancedHomodyne {
    double r;
    double theta;
};

class ModelSpec {
  public:
    using Variant = std::variant<SequentialVN, ArthursKelly, EightPort, BalancedHomodyne>;

    static ModelSpec sequential_vn(double lambda, AnalyticProbe probe);
    static ModelSpec arthurs_kelly(double lambda, double mu, AnalyticProbe probe1, AnalyticProbe probe2);
    static ModelSpec eight_port(GeneratingOperator sigma);
    static ModelSpec balanced_homodyne(double r, double theta);

    const Variant& variant() const { return variant_; }
    bool is_convolution_model() const { return !std::holds_alternative<BalancedHomodyne>(variant_); }
    std::string name() const;

  private:
    explicit ModelSpec(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

inline constexpr int kMaxTableOrder = 20;

/// sQ[k][i], sP[k][i] for 0 <= i <= k <= k_max; sQ[k][0] = sP[k][0] = 1.
struct CoefficientTable {
    int k_max = 0;
    std::vector<std::vector<double>> sQ;
    std::vector<std::vector<double>> sP;

    const std::vector<std::vector<double>>& rows(Axis axis) const { return axis == Axis::Q ? sQ : sP; }
    double at(Axis axis, int k, int i) const;

    /// s[k][i] = 0 for i >= 1.
    static CoefficientTable identity(int k_max);
};

/// Exact binomial coefficient for n <= 60.
unsigned long long binomial(int n, int k);

/// Throws UnsupportedError for BalancedHomodyne and DomainError if k_max > 20.
CoefficientTable coefficient_table(const ModelSpec& model, int k_max);

/// Noise kernels (f, g) sampled on `grid`, which needs a node at the origin.
/// Throws GridError when either kernel mass on the grid deviates from 1 by
/// more than 1e-6.
std::pair<GridDensity, GridDensity> detector_kernels(const ModelSpec& model, const Grid& grid);

/// Outcome density f * rho_Q (or g * rho_P) of the simulated experiment.
/// Throws GridError when more than 1e-8 of the mass leaks past the grid edge.
GridDensity measured_marginal_density(const ModelSpec& model, const StateVector& state, Axis axis,
                                      const Grid& grid);

double measured_moment(const ModelSpec& model, const StateVector& state, Axis axis, int k);

/// Measured moments m_0..m_K in one pass (shares the coefficient table).
std::vector<double> measured_moments(const ModelSpec& model, const StateVector& state, Axis axis, int K);

/// d(G1, Q) = (1/lambda) int |x| |phi|^2 for Axis::Q and
/// d(G2, P) = lambda int |x| |phi^|^2 for Axis::P. SequentialVN only.
double geometric_distance(const ModelSpec& model, Axis axis);

/// Var(Q0, phi) / lambda^2. SequentialVN only.
double intrinsic_noise_vn(const ModelSpec& model);

struct HomodyneMoments {
    double m1;
    double m2;
};

/// First and second moments of balanced homodyne statistics:
/// m1 = <Q_theta>, m2 = <Q_theta^2> + <N> / (2 r^2).
HomodyneMoments homodyne_moment12(const StateVector& state, double r, double theta);

struct UncertaintyProduct {
    double product;
    bool bound_ok; ///< product >= 1/4 - 1e-12
};

/// (Var(Q) + <N>/(2r^2)) (Var(P) + <N>/(2r^2)) from homodyne runs at theta = 0, pi/2.
UncertaintyProduct uncertainty_product(const StateVector& state, double r);

} // namespace pmtomo
