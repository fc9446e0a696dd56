#include "pmtomo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <thread>

#include "pmtomo/errors.hpp"

namespace pmtomo {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Piecewise-linear inverse CDF of a grid density.
class InverseCdf {
  public:
    explicit InverseCdf(const GridDensity& d) : grid_(d.grid), values_(d.values), cumulative_(d.values.size(), 0.0) {
        for (std::size_t i = 1; i < values_.size(); ++i)
            cumulative_[i] = cumulative_[i - 1] + 0.5 * grid_.dx * (values_[i - 1] + values_[i]);
    }

    double operator()(double u) const {
        const double target = u * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        std::size_t j = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
        j = std::min(j, values_.size() - 2);
        const double residual = std::max(0.0, target - cumulative_[j]);
        const double d0 = values_[j], d1 = values_[j + 1];
        // Solve d0 s + (d1 - d0) s^2 / (2 dx) = residual for s in [0, dx].
        const double a = (d1 - d0) / (2.0 * grid_.dx);
        double s;
        const double disc = d0 * d0 + 4.0 * a * residual;
        const double denom = d0 + std::sqrt(std::max(0.0, disc));
        if (denom > 0.0) {
            s = 2.0 * residual / denom;
        } else {
            s = 0.0;
        }
        s = std::clamp(s, 0.0, grid_.dx);
        return grid_.at(j) + s;
    }

  private:
    Grid grid_;
    std::vector<double> values_;
    std::vector<double> cumulative_;
};

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_index)
    : key_(mix64(seed ^ mix64(stream_index * kGolden + 0x632be59bd9b4e019ULL))) {}

CounterRng::result_type CounterRng::operator()() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

MomentSequence MomentSequence::exact(std::vector<double> m) {
    MomentSequence s;
    s.m = std::move(m);
    return s;
}

SampleSet sample_outcomes(const GridDensity& density, std::size_t count, std::uint64_t seed, unsigned threads) {
    if (count == 0) throw InputError("sample count must be at least 1");
    if (density.grid.points < 2 || density.values.size() != density.grid.points)
        throw InputError("density is not sampled on its grid");
    if (std::abs(density.mass() - 1.0) > 1e-6) throw InputError("density is not normalised");
    const InverseCdf inverse(density);

    SampleSet out;
    out.values.resize(count);
    out.seed = seed;
    const std::size_t streams = (count + kSamplesPerStream - 1) / kSamplesPerStream;
    auto run_stream = [&](std::size_t s) {
        CounterRng rng(seed, s);
        const std::size_t begin = s * kSamplesPerStream;
        const std::size_t end = std::min(count, begin + kSamplesPerStream);
        for (std::size_t i = begin; i < end; ++i) out.values[i] = inverse(rng.uniform());
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, streams));
    if (workers <= 1) {
        for (std::size_t s = 0; s < streams; ++s) run_stream(s);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t s = w; s < streams; s += workers) run_stream(s);
            });
    }
    return out;
}

MomentSequence empirical_moments(const SampleSet& samples, int K) {
    if (K < 0) throw DomainError("moment order must be nonnegative");
    if (samples.values.empty()) throw InputError("empty sample set");
    const std::size_t n = samples.values.size();
    const auto nd = static_cast<long double>(n);

    std::vector<long double> sum(K + 1, 0.0L);
    for (double x : samples.values) {
        long double p = 1.0L;
        for (int k = 0; k <= K; ++k) {
            sum[k] += p;
            p *= x;
        }
    }
    std::vector<long double> mean(K + 1);
    for (int k = 0; k <= K; ++k) mean[k] = sum[k] / nd;

    // Second pass: covariance of x^j and x^l about their means.
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(K + 1, K + 1);
    std::vector<long double> acc((K + 1) * (K + 1), 0.0L), dev(K + 1);
    for (double x : samples.values) {
        long double p = 1.0L;
        for (int k = 0; k <= K; ++k) {
            dev[k] = p - mean[k];
            p *= x;
        }
        for (int j = 1; j <= K; ++j)
            for (int l = j; l <= K; ++l) acc[j * (K + 1) + l] += dev[j] * dev[l];
    }
    const long double denom = n > 1 ? nd - 1.0L : 1.0L;
    for (int j = 1; j <= K; ++j)
        for (int l = j; l <= K; ++l) {
            const double c = static_cast<double>(acc[j * (K + 1) + l] / denom / nd);
            cov(j, l) = cov(l, j) = c;
        }

    MomentSequence out;
    out.m.resize(K + 1);
    out.se.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
        out.m[k] = static_cast<double>(mean[k]);
        out.se[k] = std::sqrt(std::max(0.0, cov(k, k)));
    }
    out.m[0] = 1.0;
    out.se[0] = 0.0;
    out.covariance = std::move(cov);
    out.above_reliability_ceiling = K > kEmpiricalMomentCeiling;
    return out;
}

void write_samples_csv(std::ostream& os, const SampleSet& samples) {
    os << "# seed=" << samples.seed << " source=" << samples.source << "\n";
    os << "value\n";
    os << std::setprecision(17);
    for (double x : samples.values) os << x << "\n";
}

} // namespace pmtomo
