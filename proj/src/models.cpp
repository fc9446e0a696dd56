#include "pmtomo/models.hpp"

#include <cmath>
#include <limits>
#include <functional>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "pmtomo/errors.hpp"

namespace pmtomo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

const SequentialVN& require_vn(const ModelSpec& model, const char* what) {
    const auto* vn = std::get_if<SequentialVN>(&model.variant());
    if (!vn) throw UnsupportedError(std::string(what) + " is only defined for the sequential von Neumann model");
    return *vn;
}

// i-th moment of the additive outcome noise of a convolution model.
double noise_moment(const ModelSpec::Variant& model, Axis axis, int i) {
    return std::visit(
        overloaded{
            [&](const SequentialVN& m) {
                const double scale = axis == Axis::Q ? 1.0 / m.lambda : m.lambda;
                return std::pow(scale, i) * probe_moment(m.probe, axis, i);
            },
            [&](const ArthursKelly& m) {
                // Q noise: Y1/lambda - mu Y2;  P noise: Z2/mu - lambda Z1.
                const bool q = axis == Axis::Q;
                const double own = q ? 1.0 / m.lambda : 1.0 / m.mu;
                const double cross = q ? -m.mu : -m.lambda;
                const AnalyticProbe& first = q ? m.probe1 : m.probe2;
                const AnalyticProbe& second = q ? m.probe2 : m.probe1;
                double s = 0.0;
                for (int j = 0; j <= i; ++j)
                    s += static_cast<double>(binomial(i, j)) * std::pow(own, i - j) * std::pow(cross, j) *
                         probe_moment(first, axis, i - j) * probe_moment(second, axis, j);
                return s;
            },
            [&](const EightPort& m) {
                const double sign = (i % 2 == 0) ? 1.0 : -1.0;
                return sign * m.sigma.conjugated().trace_moment(axis, i);
            },
            [&](const BalancedHomodyne&) -> double {
                throw UnsupportedError("balanced homodyne moments are not of convolution form; use homodyne_moment12");
            },
        },
        model);
}

std::vector<double> sample(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) v[i] = f(grid.at(i));
    return v;
}

GridDensity checked_kernel(const Grid& grid, std::vector<double> values, const char* which) {
    const double mass = trapezoid(grid, values);
    if (std::abs(mass - 1.0) > 1e-6) {
        std::ostringstream os;
        os << which << " kernel has mass " << mass << " on the grid; refine or widen the grid";
        throw GridError(os.str());
    }
    return GridDensity::normalized(grid, std::move(values));
}

} // namespace

// ---------------------------------------------------------------------------
// GeneratingOperator

GeneratingOperator::GeneratingOperator(std::vector<Component> spectrum) : spectrum_(std::move(spectrum)) {
    if (spectrum_.empty()) throw DomainError("generating operator needs at least one component");
    double total = 0.0;
    for (const auto& c : spectrum_) {
        if (!(c.weight > 0.0)) throw DomainError("generating operator weights must be positive");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-10) throw DomainError("generating operator weights must sum to 1");
    for (std::size_t i = 0; i < spectrum_.size(); ++i)
        for (std::size_t j = i + 1; j < spectrum_.size(); ++j)
            if (std::abs(spectrum_[i].vector.inner(spectrum_[j].vector)) > 1e-10)
                throw DomainError("generating operator eigenvectors are not orthogonal");
}

GeneratingOperator GeneratingOperator::pure(StateVector eta) {
    return GeneratingOperator({Component{1.0, std::move(eta)}});
}

GeneratingOperator GeneratingOperator::vacuum() { return pure(StateVector::number(0)); }

GeneratingOperator GeneratingOperator::conjugated() const {
    std::vector<Component> s;
    s.reserve(spectrum_.size());
    for (const auto& c : spectrum_) s.push_back({c.weight, c.vector.conjugated()});
    return GeneratingOperator(std::move(s));
}

double GeneratingOperator::trace_moment(Axis axis, int k) const {
    double s = 0.0;
    for (const auto& c : spectrum_) s += c.weight * exact_moment(c.vector, axis, k);
    return s;
}

// ---------------------------------------------------------------------------
// ModelSpec

ModelSpec ModelSpec::sequential_vn(double lambda, AnalyticProbe probe) {
    if (!(lambda > 0.0)) throw DomainError("coupling constant lambda must be positive");
    return ModelSpec(SequentialVN{lambda, std::move(probe)});
}

ModelSpec ModelSpec::arthurs_kelly(double lambda, double mu, AnalyticProbe probe1, AnalyticProbe probe2) {
    if (!(lambda > 0.0) || !(mu > 0.0)) throw DomainError("coupling constants lambda, mu must be positive");
    return ModelSpec(ArthursKelly{lambda, mu, std::move(probe1), std::move(probe2)});
}

ModelSpec ModelSpec::eight_port(GeneratingOperator sigma) { return ModelSpec(EightPort{std::move(sigma)}); }

ModelSpec ModelSpec::balanced_homodyne(double r, double theta) {
    if (!(r > 0.0)) throw DomainError("reference amplitude r must be positive");
    if (!(theta >= 0.0 && theta < 2.0 * std::numbers::pi)) throw DomainError("phase theta must lie in [0, 2pi)");
    return ModelSpec(BalancedHomodyne{r, theta});
}

std::string ModelSpec::name() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const SequentialVN& m) {
                       os << "sequential_vn(lambda=" << m.lambda << ", probe=" << m.probe.describe() << ")";
                   },
                   [&](const ArthursKelly& m) {
                       os << "arthurs_kelly(lambda=" << m.lambda << ", mu=" << m.mu
                          << ", probe1=" << m.probe1.describe() << ", probe2=" << m.probe2.describe() << ")";
                   },
                   [&](const EightPort& m) { os << "eight_port(rank=" << m.sigma.spectrum().size() << ")"; },
                   [&](const BalancedHomodyne& m) {
                       os << "balanced_homodyne(r=" << m.r << ", theta=" << m.theta << ")";
                   },
               },
               variant_);
    return os.str();
}

// ---------------------------------------------------------------------------
// Tables

unsigned long long binomial(int n, int k) {
    if (n < 0 || n > 60) throw DomainError("binomial supports 0 <= n <= 60");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned long long c = 1;
    for (int j = 1; j <= k; ++j) c = c * static_cast<unsigned long long>(n - k + j) / static_cast<unsigned long long>(j);
    return c;
}

double CoefficientTable::at(Axis axis, int k, int i) const {
    if (k < 0 || k > k_max || i < 0 || i > k) throw TableError("coefficient index out of range");
    return rows(axis)[k][i];
}

CoefficientTable CoefficientTable::identity(int k_max) {
    CoefficientTable t;
    t.k_max = k_max;
    for (int k = 0; k <= k_max; ++k) {
        std::vector<double> row(k + 1, 0.0);
        row[0] = 1.0;
        t.sQ.push_back(row);
        t.sP.push_back(row);
    }
    return t;
}

CoefficientTable coefficient_table(const ModelSpec& model, int k_max) {
    if (k_max < 0 || k_max > kMaxTableOrder)
        throw DomainError("coefficient tables are built for 0 <= k_max <= " + std::to_string(kMaxTableOrder));
    if (!model.is_convolution_model())
        throw UnsupportedError("balanced homodyne has no coefficient table; use homodyne_moment12");
    std::vector<double> nq(k_max + 1), np(k_max + 1);
    for (int i = 0; i <= k_max; ++i) {
        nq[i] = noise_moment(model.variant(), Axis::Q, i);
        np[i] = noise_moment(model.variant(), Axis::P, i);
    }
    CoefficientTable t;
    t.k_max = k_max;
    for (int k = 0; k <= k_max; ++k) {
        std::vector<double> rq(k + 1), rp(k + 1);
        for (int i = 0; i <= k; ++i) {
            const auto c = static_cast<double>(binomial(k, i));
            rq[i] = c * nq[i];
            rp[i] = c * np[i];
        }
        rq[0] = rp[0] = 1.0;
        t.sQ.push_back(std::move(rq));
        t.sP.push_back(std::move(rp));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Kernels and measured statistics

std::pair<GridDensity, GridDensity> detector_kernels(const ModelSpec& model, const Grid& grid) {
    if (!grid.origin_index()) throw GridError("detector kernels need a grid with a node at the origin");
    return std::visit(
        overloaded{
            [&](const SequentialVN& m) {
                const double l = m.lambda;
                auto f = sample(grid, [&](double x) { return l * m.probe.position_density(l * x); });
                auto g = sample(grid, [&](double p) { return m.probe.momentum_density(p / l) / l; });
                return std::pair{checked_kernel(grid, std::move(f), "position"),
                                 checked_kernel(grid, std::move(g), "momentum")};
            },
            [&](const ArthursKelly& m) {
                const double l = m.lambda, u = m.mu;
                const auto f1 = sample(grid, [&](double x) { return l * m.probe1.position_density(l * x); });
                const auto f2 = sample(grid, [&](double x) { return m.probe2.position_density(-x / u) / u; });
                const auto g1 = sample(grid, [&](double p) { return u * m.probe2.momentum_density(u * p); });
                const auto g2 = sample(grid, [&](double p) { return m.probe1.momentum_density(-p / l) / l; });
                return std::pair{checked_kernel(grid, convolve(grid, f1, grid, f2), "position"),
                                 checked_kernel(grid, convolve(grid, g1, grid, g2), "momentum")};
            },
            [&](const EightPort& m) {
                // f(q) = sum t |eta_T(-q)|^2, g(p) = sum t |eta_T^(-p)|^2 with T = C sigma C^-1.
                const auto T = m.sigma.conjugated();
                std::vector<double> f(grid.points, 0.0), g(grid.points, 0.0);
                for (const auto& c : T.spectrum()) {
                    const auto fq = hermite_wavefunction(c.vector.reflected(), grid);
                    const auto fp = hermite_wavefunction(fourier_transform(c.vector).reflected(), grid);
                    for (std::size_t i = 0; i < grid.points; ++i) {
                        f[i] += c.weight * std::norm(fq.values[i]);
                        g[i] += c.weight * std::norm(fp.values[i]);
                    }
                }
                return std::pair{checked_kernel(grid, std::move(f), "position"),
                                 checked_kernel(grid, std::move(g), "momentum")};
            },
            [&](const BalancedHomodyne&) -> std::pair<GridDensity, GridDensity> {
                throw UnsupportedError("balanced homodyne statistics are not of convolution form");
            },
        },
        model.variant());
}

GridDensity measured_marginal_density(const ModelSpec& model, const StateVector& state, Axis axis,
                                      const Grid& grid) {
    if (!model.is_convolution_model())
        throw UnsupportedError("balanced homodyne statistics are not of convolution form");
    const auto [f, g] = detector_kernels(model, grid);
    const auto rho = axis == Axis::Q ? position_density(state, grid) : momentum_density(state, grid);
    const auto& kernel = axis == Axis::Q ? f : g;
    auto out = convolve(grid, kernel.values, grid, rho.values);
    const double mass = trapezoid(grid, out);
    if (1.0 - mass > 1e-8) {
        std::ostringstream os;
        os << "measured density loses " << 1.0 - mass << " of its mass past the grid edge";
        throw GridError(os.str());
    }
    return GridDensity::normalized(grid, std::move(out));
}

std::vector<double> measured_moments(const ModelSpec& model, const StateVector& state, Axis axis, int K) {
    const auto table = coefficient_table(model, K);
    std::vector<double> exact(K + 1);
    for (int k = 0; k <= K; ++k) exact[k] = exact_moment(state, axis, k);
    std::vector<double> m(K + 1);
    const auto& s = table.rows(axis);
    for (int k = 0; k <= K; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i) acc += s[k][i] * exact[k - i];
        m[k] = acc;
    }
    return m;
}

double measured_moment(const ModelSpec& model, const StateVector& state, Axis axis, int k) {
    if (k < 0) throw DomainError("moment order must be nonnegative");
    return measured_moments(model, state, axis, k)[k];
}

double geometric_distance(const ModelSpec& model, Axis axis) {
    const auto& vn = require_vn(model, "geometric distance");
    boost::math::quadrature::exp_sinh<double> integrator;
    auto density = [&](double x) {
        return axis == Axis::Q ? vn.probe.position_density(x) : vn.probe.momentum_density(x);
    };
    const double first_abs_moment =
        integrator.integrate([&](double x) { return x * (density(x) + density(-x)); }, 0.0,
                             std::numeric_limits<double>::infinity(), 1e-14);
    return axis == Axis::Q ? first_abs_moment / vn.lambda : vn.lambda * first_abs_moment;
}

double intrinsic_noise_vn(const ModelSpec& model) {
    const auto& vn = require_vn(model, "intrinsic noise");
    const double m1 = probe_moment(vn.probe, Axis::Q, 1);
    const double m2 = probe_moment(vn.probe, Axis::Q, 2);
    return (m2 - m1 * m1) / (vn.lambda * vn.lambda);
}

HomodyneMoments homodyne_moment12(const StateVector& state, double r, double theta) {
    if (!(r > 0.0)) throw DomainError("reference amplitude r must be positive");
    const double noise = 0.5 * mean_photon_number(state) / (r * r);
    return {quadrature_moment(state, theta, 1), quadrature_moment(state, theta, 2) + noise};
}

UncertaintyProduct uncertainty_product(const StateVector& state, double r) {
    const auto q = homodyne_moment12(state, r, 0.0);
    const auto p = homodyne_moment12(state, r, std::numbers::pi / 2.0);
    const double product = (q.m2 - q.m1 * q.m1) * (p.m2 - p.m1 * p.m1);
    return {product, product >= 0.25 - 1e-12};
}

} // namespace pmtomo
