#ifndef LEVYFIELD_RNG_HPP
#define LEVYFIELD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace levyfield {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// One independent random stream per Monte Carlo path, derived from
/// (master_seed, stream_id) so results do not depend on the worker count.
class PathRng {
  public:
    PathRng(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t s = master_seed;
        (void)splitmix64(s);
        s ^= 0xD1B54A32D192ED03ULL * (stream_id + 1);
        engine_.seed(splitmix64(s));
    }

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1); safe as a log() argument.
    double uniform_pos() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal (Box-Muller; the second deviate of each pair is cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Exponential with unit rate.
    double exponential() { return -std::log(uniform_pos()); }

    /// Poisson count. Exponential-spacings for small means, PTRS transformed
    /// rejection (Hormann 1993) for large ones. Both consume only uniforms.
    long long poisson(double mean) {
        if (mean < 0.0 || !std::isfinite(mean))
            throw std::invalid_argument("poisson: mean must be finite and >= 0");
        if (mean == 0.0) return 0;
        if (mean <= 60.0) {
            long long k = -1;
            double acc = 0.0;
            while (acc < mean) {
                acc += exponential();
                ++k;
            }
            return k;
        }
        return poisson_ptrs(mean);
    }

  private:
    long long poisson_ptrs(double mu) {
        const double b = 0.931 + 2.53 * std::sqrt(mu);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mu = std::log(mu);
        for (int iter = 0; iter < 10000; ++iter) {
            const double u = uniform() - 0.5;
            const double v = uniform_pos();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            const double k = kf;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mu - mu - log_factorial(k))
                return static_cast<long long>(kf);
        }
        throw std::runtime_error("poisson: rejection loop exceeded iteration cap");
    }

    static double log_factorial(double k) {
#if defined(__GLIBC__)
        int sign = 0;
        return ::lgamma_r(k + 1.0, &sign);
#else
        return std::lgamma(k + 1.0);
#endif
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace levyfield

#endif
