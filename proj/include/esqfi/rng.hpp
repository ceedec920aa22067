#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace esqfi {

/// splitmix64 step; the workhorse behind the per-trial substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic per-trial random stream: trial i of a run with a given seed
/// always produces the same draws, independent of how trials are partitioned
/// across workers.  Normal variates come from Box-Muller on 53-bit uniforms,
/// so reports are reproducible bit-for-bit from (seed, trial index).
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial_index) {
        std::uint64_t s = seed ^ 0xD1B54A32D192ED03ULL;
        state_ = splitmix64(s) + trial_index * 0x9E3779B97F4A7C15ULL;
        (void)splitmix64(state_);  // decorrelate adjacent trial indices
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::uint64_t state_ = 0;
};

}  // namespace esqfi
