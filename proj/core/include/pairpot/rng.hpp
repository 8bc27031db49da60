#pragma once

#include <cstdint>
#include <random>

namespace pairpot {

/// Deterministic random stream. Wraps std::mt19937_64 but generates
/// variates through fixed algorithms (no std::*_distribution), so a
/// (seed, stream) pair reproduces the same draws on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(mix(seed, stream)) {}

    /// Stream derivation rule: worker k of a job seeded s draws from
    /// Rng(s, k); streams are decorrelated by the splitmix64 mix.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    /// Exact Poisson(mean) via multiplication in chunks, so large means
    /// never underflow. O(mean) uniforms per draw.
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
};

} // namespace pairpot
