#include "pmtomo/grid.hpp"

#include <algorithm>
#include <cmath>

#include "pmtomo/errors.hpp"

namespace pmtomo {

Grid Grid::symmetric(double half_width, std::size_t points) {
    if (!(half_width > 0.0) || points < 3)
        throw DomainError("symmetric grid needs half_width > 0 and at least 3 points");
    Grid g;
    g.x0 = -half_width;
    g.dx = 2.0 * half_width / static_cast<double>(points - 1);
    g.points = points;
    return g;
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(points);
    for (std::size_t i = 0; i < points; ++i) x[i] = at(i);
    return x;
}

std::optional<std::size_t> Grid::origin_index() const {
    const double idx = -x0 / dx;
    const double rounded = std::round(idx);
    if (rounded < 0 || rounded >= static_cast<double>(points) || std::abs(idx - rounded) > 1e-9)
        return std::nullopt;
    return static_cast<std::size_t>(rounded);
}

bool Grid::same_as(const Grid& other) const {
    return points == other.points && std::abs(dx - other.dx) <= 1e-12 * std::abs(dx) &&
           std::abs(x0 - other.x0) <= 1e-9 * dx;
}

Grid default_grid(std::size_t dim) {
    const double half_width = std::sqrt(2.0 * static_cast<double>(std::max<std::size_t>(dim, 1))) + 8.0;
    return Grid::symmetric(half_width, kDefaultGridPoints);
}

double trapezoid(const Grid& grid, std::span<const double> values) {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    s -= 0.5 * (values.front() + values.back());
    return s * grid.dx;
}

GridDensity GridDensity::normalized(const Grid& grid, std::vector<double> values) {
    if (values.size() != grid.points) throw InputError("density size does not match grid");
    double peak = 0.0;
    for (double v : values) peak = std::max(peak, std::abs(v));
    for (double& v : values) {
        if (!std::isfinite(v)) throw InputError("density has non-finite values");
        if (v < 0.0) {
            if (v < -1e-8 * peak) throw InputError("density has negative values");
            v = 0.0;
        }
    }
    const double m = trapezoid(grid, values);
    if (!(m > 0.0)) throw InputError("density has zero mass");
    for (double& v : values) v /= m;
    return GridDensity{grid, std::move(values)};
}

double GridDensity::mass() const { return trapezoid(grid, values); }

double GridDensity::moment(int k) const {
    std::vector<double> w(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) w[i] = std::pow(grid.at(i), k) * values[i];
    return trapezoid(grid, w);
}

double GridDensity::mean() const { return moment(1) / mass(); }

double GridDensity::variance() const {
    const double m0 = mass();
    const double mu = moment(1) / m0;
    return moment(2) / m0 - mu * mu;
}

double GridDensity::value_at(double x) const {
    const double t = (x - grid.x0) / grid.dx;
    if (t < 0.0 || t > static_cast<double>(grid.points - 1)) return 0.0;
    const auto i = std::min(static_cast<std::size_t>(t), grid.points - 2);
    const double s = t - static_cast<double>(i);
    return (1.0 - s) * values[i] + s * values[i + 1];
}

double l1_distance(const Grid& grid, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InputError("l1_distance: size mismatch");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::abs(a[i] - b[i]);
    return trapezoid(grid, d);
}

double l1_distance(const GridDensity& a, const GridDensity& b) {
    if (!a.grid.same_as(b.grid)) throw InputError("l1_distance: densities live on different grids");
    return l1_distance(a.grid, a.values, b.values);
}

std::vector<double> convolve(const Grid& kernel_grid, std::span<const double> kernel,
                             const Grid& signal_grid, std::span<const double> signal) {
    if (std::abs(kernel_grid.dx - signal_grid.dx) > 1e-12 * signal_grid.dx)
        throw GridError("convolve: kernel and signal grids have different spacing");
    const auto centre = kernel_grid.origin_index();
    if (!centre) throw GridError("convolve: kernel grid has no node at the origin");
    // Direct summation over the nonzero supports. For densities every term
    // is nonnegative, so the tails keep full relative accuracy; an FFT would
    // leave roundoff near 1e-16 of the peak there, which high moments amplify.
    auto support = [](std::span<const double> v) {
        std::size_t lo = 0, hi = v.size();
        while (lo < hi && v[lo] == 0.0) ++lo;
        while (hi > lo && v[hi - 1] == 0.0) --hi;
        return std::pair{lo, hi};
    };
    const auto [klo, khi] = support(kernel);
    const auto [slo, shi] = support(signal);
    const auto n = static_cast<std::ptrdiff_t>(signal.size());
    const auto c = static_cast<std::ptrdiff_t>(*centre);
    std::vector<double> out(signal.size(), 0.0);
    for (std::size_t j = slo; j < shi; ++j) {
        const double sj = signal[j] * signal_grid.dx;
        if (sj == 0.0) continue;
        // m = k - centre + j must lie in [0, n).
        const auto shift = static_cast<std::ptrdiff_t>(j) - c;
        const auto k0 = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(klo), -shift);
        const auto k1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(khi), n - shift);
        for (auto k = k0; k < k1; ++k) out[static_cast<std::size_t>(k + shift)] += kernel[static_cast<std::size_t>(k)] * sj;
    }
    return out;
}

} // namespace pmtomo
