#pragma once

#include <numbers>
#include <random>

#include "esqfi/resonator.hpp"

namespace esqfi::test {

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

struct Sample {
    SystemParams p;
    double omega;
};

/// Random valid parameters with the frequency kept away from resolvent poles
/// (|den| >= guard * gamma^2) so closed forms and finite differences stay
/// well conditioned.
inline Sample sample_params(std::mt19937_64& g, double guard = 0.3, bool vary_gamma = true) {
    for (;;) {
        const double gamma = vary_gamma ? uniform(g, 0.5, 2.0) : 1.0;
        const double rho = uniform(g, 0.0, 1.0);
        const double phi = uniform(g, 0.0, 2.0 * std::numbers::pi);
        const double eps = uniform(g, -gamma, gamma);
        const double omega = uniform(g, -5.0 * gamma, 5.0 * gamma);
        const SystemParams p = SystemParams::make(gamma, rho, phi, eps);
        if (std::abs(resolvent_denominator(p, omega)) >= guard * gamma * gamma) {
            return {p, omega};
        }
    }
}

}  // namespace esqfi::test
