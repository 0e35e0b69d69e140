#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace driftbudget {

namespace detail {

// Finalizer with full 64-bit avalanche (splitmix64's output stage).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Deterministic per-trial random stream. The state is a single 64-bit
// splitmix64 counter seeded by mixing (master_seed, trial_index), so any
// trial of an ensemble can be reproduced in isolation and results do not
// depend on how trials are distributed over threads.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t trial_index)
        : state_(derive_state(master_seed, trial_index)) {}

    static std::uint64_t derive_state(std::uint64_t master_seed, std::uint64_t trial_index) {
        std::uint64_t h = detail::mix64(master_seed ^ 0x9e3779b97f4a7c15ULL);
        h = detail::mix64(h ^ (trial_index + 0x9e3779b97f4a7c15ULL));
        return h;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return detail::mix64(state_);
    }

    // Uniform double strictly inside (0,1): 53-bit mantissa centered on
    // half-steps, so neither endpoint is reachable and log() is always finite.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Uniform integer in [0, bound) by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("RngStream::below: bound must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        for (;;) {
            std::uint64_t v = next_u64();
            if (v < limit) return v % bound;
        }
    }

    bool coin() { return (next_u64() >> 63) != 0; }

    // Number of failures before the first success of a fair coin:
    // P(k) = 2^-(k+1), k >= 0. Counts leading zero bits of raw words,
    // chaining across all-zero words so the tail is exact.
    int geometric_half_failures() {
        int k = 0;
        for (;;) {
            std::uint64_t w = next_u64();
            if (w != 0) return k + std::countl_zero(w);
            k += 64;
        }
    }

    // Waiting time of a Bernoulli(p) process: support {1,2,...},
    // P(W = w) = (1-p)^(w-1) p. Inversion through one uniform draw.
    std::uint64_t geometric(double p) {
        if (!(p > 0.0) || p > 1.0)
            throw std::invalid_argument("RngStream::geometric: p must be in (0,1]");
        if (p >= 1.0) return 1;
        double w = 1.0 + std::floor(std::log(uniform01()) / std::log1p(-p));
        if (w < 1.0) return 1;
        // Beyond 2^62 steps the wait exceeds any budget this library handles.
        if (w >= 0x1p62) return std::uint64_t{1} << 62;
        return static_cast<std::uint64_t>(w);
    }

private:
    std::uint64_t state_;
};

} // namespace driftbudget
