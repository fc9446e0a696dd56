#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pmtomo {

using Complex = std::complex<double>;

/// Uniform real grid x_i = x0 + i*dx, i = 0..points-1.
struct Grid {
    double x0 = 0.0;
    double dx = 1.0;
    std::size_t points = 0;

    /// Grid on [-half_width, half_width]. An odd point count puts a node at 0,
    /// which convolution with centred kernels requires.
    static Grid symmetric(double half_width, std::size_t points);

    double at(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double back() const { return at(points - 1); }
    std::vector<double> nodes() const;

    /// Index of the node at the origin, if there is one.
    std::optional<std::size_t> origin_index() const;

    bool same_as(const Grid& other) const;
};

inline constexpr std::size_t kDefaultGridPoints = 4097;

/// 4097 nodes (4096 intervals) on [-L, L] with L = sqrt(2*dim) + 8.
Grid default_grid(std::size_t dim);

struct GridFunction {
    Grid grid;
    std::vector<Complex> values;
};

/// Nonnegative function on a grid with unit trapezoid mass.
struct GridDensity {
    Grid grid;
    std::vector<double> values;

    /// Clips roundoff negatives to zero and rescales to unit mass. Throws
    /// InputError on a zero-mass or clearly negative input.
    static GridDensity normalized(const Grid& grid, std::vector<double> values);

    double mass() const;
    double moment(int k) const;
    double mean() const;
    double variance() const;
    double value_at(double x) const; ///< linear interpolation, zero outside
};

double trapezoid(const Grid& grid, std::span<const double> values);

/// L1 distance between two densities sampled on the same grid.
double l1_distance(const GridDensity& a, const GridDensity& b);
double l1_distance(const Grid& grid, std::span<const double> a, std::span<const double> b);

/// Linear (non-circular) convolution (kernel * f)(x_m) = sum_j kernel(x_m - x_j) f(x_j) dx.
/// The kernel is sampled on `kernel_grid`, which must share dx with the
/// signal grid and have a node at the origin. The result lives on the signal grid.
std::vector<double> convolve(const Grid& kernel_grid, std::span<const double> kernel,
                             const Grid& signal_grid, std::span<const double> signal);

} // namespace pmtomo
