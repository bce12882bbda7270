#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace resrand {

/// splitmix64 step; used both as a standalone mixer and to seed streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive an independent stream seed from (seed, index).
/// Monte Carlo drivers use this so that draw r / replication m consumes
/// its own substream and results do not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL);
    splitmix64(s);
    return splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

/// xoshiro256++ by Blackman & Vigna; small state, fast, and good enough
/// statistical quality for simulation work.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), exactly uniform (Lemire with rejection).
    std::uint64_t uniform_below(std::uint64_t bound) {
        __uint128_t m = static_cast<__uint128_t>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (lo < threshold) {
                m = static_cast<__uint128_t>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    int rademacher() { return (next() >> 63) ? 1 : -1; }

    /// Standard normal via Box-Muller (no spare caching, so consumption is
    /// a fixed two uniforms per variate).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double lognormal() { return std::exp(normal()); }

    /// Student t with 3 degrees of freedom (unnormalized: variance 3).
    double student_t3() {
        const double z = normal();
        double chi2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double g = normal();
            chi2 += g * g;
        }
        return z / std::sqrt(chi2 / 3.0);
    }

    double cauchy() {
        double u = uniform();
        while (u == 0.5) u = uniform();
        return std::tan(std::numbers::pi * (u - 0.5));
    }

    /// The bimodal mixture .5 N(-1, .25^2) + .5 N(1, .25^2).
    double bimodal_mixture() {
        const double center = (next() >> 63) ? 1.0 : -1.0;
        return center + 0.25 * normal();
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

}  // namespace resrand
