#include "pmtomo/probe.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pmtomo/errors.hpp"

namespace pmtomo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double normal_pdf(double x, double variance) {
    return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double chirped_p_variance(const ChirpedGaussianProbe& c) { return (c.a * c.a + c.b * c.b) / c.a; }

} // namespace

AnalyticProbe AnalyticProbe::gaussian(double n) {
    if (!(n > 0.0)) throw DomainError("Gaussian probe needs n > 0");
    return AnalyticProbe(GaussianProbe{n});
}

AnalyticProbe AnalyticProbe::chirped(double a, double b) {
    if (!(a > 0.0)) throw DomainError("chirped Gaussian probe needs a > 0");
    return AnalyticProbe(ChirpedGaussianProbe{a, b});
}

AnalyticProbe AnalyticProbe::number_basis(StateVector state) {
    return AnalyticProbe(NumberBasisProbe{std::move(state)});
}

bool AnalyticProbe::closed_form_moments() const {
    return !std::holds_alternative<NumberBasisProbe>(kind_);
}

double AnalyticProbe::position_density(double x) const {
    return std::visit(overloaded{
                          [&](const GaussianProbe& g) { return normal_pdf(x, 0.5 / g.n); },
                          [&](const ChirpedGaussianProbe& c) { return normal_pdf(x, 0.25 / c.a); },
                          [&](const NumberBasisProbe& s) { return std::norm(wavefunction_at(s.state, x)); },
                      },
                      kind_);
}

double AnalyticProbe::momentum_density(double p) const {
    return std::visit(
        overloaded{
            [&](const GaussianProbe& g) { return normal_pdf(p, 0.5 * g.n); },
            [&](const ChirpedGaussianProbe& c) { return normal_pdf(p, chirped_p_variance(c)); },
            [&](const NumberBasisProbe& s) { return std::norm(wavefunction_at(fourier_transform(s.state), p)); },
        },
        kind_);
}

std::string AnalyticProbe::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const GaussianProbe& g) { os << "gaussian(n=" << g.n << ")"; },
                   [&](const ChirpedGaussianProbe& c) { os << "chirped(a=" << c.a << ", b=" << c.b << ")"; },
                   [&](const NumberBasisProbe& s) { os << "number_basis(dim=" << s.state.dim() << ")"; },
               },
               kind_);
    return os.str();
}

double gaussian_moment(double variance, int i) {
    if (i < 0) throw DomainError("moment order must be nonnegative");
    if (i % 2 == 1) return 0.0;
    double m = 1.0;
    for (int j = i - 1; j > 0; j -= 2) m *= j * variance;
    return m;
}

double probe_moment(const AnalyticProbe& probe, Axis axis, int i) {
    if (i < 0) throw DomainError("moment order must be nonnegative");
    if (i == 0) return 1.0;
    return std::visit(
        overloaded{
            [&](const GaussianProbe& g) {
                if (i % 2 == 1) return 0.0;
                // phi_n^ = phi_{1/n}, so P0 moments follow from n -> 1/n.
                const double scale = axis == Axis::Q ? g.n : 1.0 / g.n;
                return std::pow(scale, -0.5 * i) * std::tgamma(0.5 * (i + 1)) / std::sqrt(std::numbers::pi);
            },
            [&](const ChirpedGaussianProbe& c) {
                return gaussian_moment(axis == Axis::Q ? 0.25 / c.a : chirped_p_variance(c), i);
            },
            [&](const NumberBasisProbe& s) { return exact_moment(s.state, axis, i); },
        },
        probe.kind());
}

std::pair<GridDensity, GridDensity> chirped_gaussian_densities(double a, double b, const Grid& grid) {
    if (!(a > 0.0)) throw DomainError("chirped Gaussian needs a > 0");
    const ChirpedGaussianProbe c{a, b};
    std::vector<double> rq(grid.points), rp(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double x = grid.at(i);
        rq[i] = std::sqrt(2.0 * a / std::numbers::pi) * std::exp(-2.0 * a * x * x);
        rp[i] = normal_pdf(x, chirped_p_variance(c));
    }
    return {GridDensity::normalized(grid, std::move(rq)), GridDensity::normalized(grid, std::move(rp))};
}

} // namespace pmtomo
