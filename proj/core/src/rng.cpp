#include "pairpot/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pairpot {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = splitmix64(state);
    return a ^ (b + 0x9e3779b97f4a7c15ULL);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    // Rejection to kill modulo bias; at most a couple of retries.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson: mean must be finite and nonnegative");
    }
    // Poisson(a+b) = Poisson(a) + Poisson(b): draw in chunks small enough
    // that exp(-chunk) stays well inside double range.
    std::uint64_t total = 0;
    double remaining = mean;
    constexpr double chunk = 16.0;
    while (remaining > 0.0) {
        const double lam = remaining > chunk ? chunk : remaining;
        remaining -= lam;
        const double threshold = std::exp(-lam);
        std::uint64_t k = 0;
        double product = uniform01();
        while (product > threshold) {
            ++k;
            product *= uniform01();
        }
        total += k;
    }
    return total;
}

} // namespace pairpot
