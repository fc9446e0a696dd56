#pragma once

// FFT plumbing shared by convolution and the deconvolution routes.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace pmtomo::detail {

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Forward DFT of a zero-padded real sequence.
inline std::vector<std::complex<double>> rfft_padded(std::span<const double> x, std::size_t size) {
    std::vector<std::complex<double>> in(size, 0.0), out;
    for (std::size_t i = 0; i < x.size() && i < size; ++i) in[i] = x[i];
    Eigen::FFT<double> fft;
    fft.fwd(out, in);
    return out;
}

/// Inverse DFT (1/N normalised), real part.
inline std::vector<double> irfft(const std::vector<std::complex<double>>& spectrum) {
    std::vector<std::complex<double>> out;
    Eigen::FFT<double> fft;
    fft.inv(out, spectrum);
    std::vector<double> re(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) re[i] = out[i].real();
    return re;
}

/// Angular frequency of DFT bin j for sample spacing dx.
inline double bin_frequency(std::size_t j, std::size_t size, double dx) {
    const double two_pi = 6.283185307179586476925286766559;
    const auto sj = j <= size / 2 ? static_cast<double>(j)
                                  : static_cast<double>(j) - static_cast<double>(size);
    return two_pi * sj / (static_cast<double>(size) * dx);
}

} // namespace pmtomo::detail
