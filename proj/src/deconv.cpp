#include "pmtomo/deconv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spectral.hpp"

namespace pmtomo {

namespace {

std::vector<double> clipped(std::vector<double> v) {
    for (double& x : v) x = std::max(x, 0.0);
    return v;
}

} // namespace

FourierDeconvolution fourier_deconvolve_full(const GridDensity& measured, const GridDensity& kernel, double eps) {
    if (!(eps >= 0.0)) throw DomainError("regularisation eps must be nonnegative");
    const Grid& grid = measured.grid;
    if (std::abs(kernel.grid.dx - grid.dx) > 1e-12 * grid.dx)
        throw GridError("measured density and kernel use different grid spacings");
    const auto centre = kernel.grid.origin_index();
    if (!centre) throw GridError("kernel grid needs a node at the origin");

    const std::size_t n = grid.points;
    const std::size_t size = detail::next_pow2(n + kernel.grid.points);
    std::vector<double> wrapped(size, 0.0);
    for (std::size_t i = 0; i < kernel.values.size(); ++i) {
        const auto offset = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(*centre);
        const auto idx = static_cast<std::size_t>((offset % static_cast<std::ptrdiff_t>(size) + size) % size);
        wrapped[idx] += kernel.values[i];
    }
    auto kf = detail::rfft_padded(wrapped, size);
    const auto mf = detail::rfft_padded(measured.values, size);

    double peak = 0.0;
    for (const auto& c : mf) peak = std::max(peak, std::abs(c));
    std::size_t band = 0, floored = 0;
    std::vector<std::complex<double>> rf(size);
    for (std::size_t j = 0; j < size; ++j) {
        std::complex<double> k = kf[j] * grid.dx;
        const double mag = std::abs(k);
        const bool in_band = std::abs(mf[j]) > kSpectralBandFloor * peak;
        if (mag < eps) {
            k = mag > 0.0 ? k + eps * k / mag : std::complex<double>(eps, 0.0);
            if (in_band) ++floored;
        }
        if (in_band) ++band;
        rf[j] = (mag == 0.0 && eps == 0.0) ? std::complex<double>(0.0) : mf[j] / k;
    }
    FourierDeconvolution out;
    out.floored_fraction = band == 0 ? 0.0 : static_cast<double>(floored) / static_cast<double>(band);
    if (out.floored_fraction > 0.5) {
        std::ostringstream os;
        os << "kernel transform is below eps on " << 100.0 * out.floored_fraction
           << "% of the measured band; the inversion is ill-posed";
        throw IllPosedError(os.str());
    }
    const auto rho = detail::irfft(rf);
    out.unclipped.assign(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(n));
    out.density = GridDensity::normalized(grid, clipped(out.unclipped));
    return out;
}

GridDensity fourier_deconvolve(const GridDensity& measured, const GridDensity& kernel, double eps) {
    return fourier_deconvolve_full(measured, kernel, eps).density;
}

DifferentialDeconvolution gaussian_differential_deconvolve_full(const GridDensity& measured, int order) {
    if (order < 0 || order > kMaxDifferentialOrder)
        throw DomainError("differential inversion order must lie in [0, " + std::to_string(kMaxDifferentialOrder) + "]");
    const Grid& grid = measured.grid;
    const std::size_t n = grid.points;
    const std::size_t size = detail::next_pow2(2 * n);
    const auto mf = detail::rfft_padded(measured.values, size);

    double peak = 0.0;
    for (const auto& c : mf) peak = std::max(peak, std::abs(c));
    // The top tenth of the frequency range must be at roundoff level.
    double tail = 0.0, cutoff = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
        const double t = std::abs(detail::bin_frequency(j, size, grid.dx));
        const double rel = std::abs(mf[j]) / peak;
        if (t > 0.9 * std::abs(detail::bin_frequency(size / 2, size, grid.dx))) tail = std::max(tail, rel);
        if (rel >= kSpectralBandFloor) cutoff = std::max(cutoff, t);
    }
    if (tail > 1e-10)
        throw PreconditionError("measured density is not smooth on the grid (spectral tail above 1e-10)");

    DifferentialDeconvolution out;
    std::vector<std::complex<double>> term(size), partial(size, 0.0);
    std::vector<double> weight(size, 1.0), t2(size);
    for (std::size_t j = 0; j < size; ++j) {
        const double t = detail::bin_frequency(j, size, grid.dx);
        t2[j] = t * t;
        if (std::abs(t) > cutoff) weight[j] = 0.0;
    }
    std::vector<std::complex<double>> last_stable = partial;
    int last_stable_order = -1;
    int rising = 0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0)
            for (std::size_t j = 0; j < size; ++j) weight[j] *= 0.25 * t2[j] / k;
        for (std::size_t j = 0; j < size; ++j) term[j] = weight[j] * mf[j];
        const auto tx = detail::irfft(term);
        out.term_norms.push_back(l1_distance(grid, std::span(tx).first(n), std::vector<double>(n, 0.0)));
        rising = (k > 0 && out.term_norms[k] > out.term_norms[k - 1]) ? rising + 1 : 0;
        for (std::size_t j = 0; j < size; ++j) partial[j] += term[j];
        if (rising == 0) {
            last_stable = partial;
            last_stable_order = k;
        }
        if (rising >= 3) {
            std::vector<double> v = detail::irfft(last_stable);
            v.resize(n);
            std::ostringstream os;
            os << "differential series diverges: term norms grow from order " << k - 3 << " on";
            GridDensity stable = last_stable_order >= 0 ? GridDensity::normalized(grid, clipped(v)) : measured;
            throw DivergenceError(os.str(), std::move(stable), last_stable_order);
        }
    }
    auto rho = detail::irfft(partial);
    rho.resize(n);
    out.unclipped = rho;
    out.density = GridDensity::normalized(grid, clipped(std::move(rho)));
    return out;
}

GridDensity gaussian_differential_deconvolve(const GridDensity& measured, int order) {
    return gaussian_differential_deconvolve_full(measured, order).density;
}

} // namespace pmtomo
