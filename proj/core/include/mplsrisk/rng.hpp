#pragma once

#include <cmath>
#include <cstdint>

namespace mplsrisk {

// splitmix64 finalizer. Used both as the stream mixer and for deriving
// independent per-trial streams from (seed, trial_index).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic uniform stream with portable output: no std:: distributions,
// so identical (seed, trial_index) gives identical draws on every platform
// and under any trial execution order.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t state) : state_(state) {}

    static RandomStream for_trial(std::uint64_t seed, std::uint64_t trial_index) {
        return RandomStream(mix64(seed ^ mix64(trial_index + 1)));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Inverse-CDF exponential draw; rate must be > 0.
    double exponential(double rate) {
        return -std::log1p(-next_double()) / rate;
    }

    // Uniform in [0, n). Modulo bias is negligible for n far below 2^64.
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace mplsrisk
