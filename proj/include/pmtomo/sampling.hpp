#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pmtomo/grid.hpp"

namespace pmtomo {

/// Counter-based generator. The stream for (seed, stream_index) is a pure
/// function of those two numbers, so work split across threads by stream
/// index reproduces the same draws whatever the thread count.
class CounterRng {
  public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream_index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();
    double uniform();  ///< in [0, 1), 53 random bits
    double normal();   ///< standard normal, Box-Muller

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct SampleSet {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string source;
};

/// Moments m_0..m_K with optional standard errors and covariance.
struct MomentSequence {
    std::vector<double> m;
    std::vector<double> se;            ///< empty when no uncertainty is attached
    Eigen::MatrixXd covariance;        ///< empty, or (K+1)x(K+1) covariance of the estimates
    bool above_reliability_ceiling = false;

    int K() const { return static_cast<int>(m.size()) - 1; }
    bool has_errors() const { return !se.empty(); }

    static MomentSequence exact(std::vector<double> m);
};

/// Draws per RNG stream; fixed so output depends only on (seed, count).
inline constexpr std::size_t kSamplesPerStream = 1u << 16;

/// i.i.d. draws by inverting the CDF of the piecewise-linear interpolant of
/// the density. `threads == 0` uses the hardware concurrency.
SampleSet sample_outcomes(const GridDensity& density, std::size_t count, std::uint64_t seed,
                          unsigned threads = 0);

/// Highest order empirical_moments treats as statistically reliable.
inline constexpr int kEmpiricalMomentCeiling = 12;

/// m_k = mean of x^k, se_k = sample std of x^k / sqrt(n); also fills the
/// covariance of the estimates (m_j, m_l).
MomentSequence empirical_moments(const SampleSet& samples, int K);

void write_samples_csv(std::ostream& os, const SampleSet& samples);

} // namespace pmtomo
