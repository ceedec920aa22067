#pragma once

#include <cstdint>
#include <utility>

#include <json.hpp>

#include "esqfi/resonator.hpp"
#include "esqfi/states.hpp"

namespace esqfi {

/// Balanced homodyne measurement of a coherent probe against a strong local
/// oscillator.  params.epsilon is the nominal operating point; the
/// difference signal is normal with mean 2 Im<alpha, K beta> and variance
/// ||alpha||^2 + ||beta||^2.
struct HomodyneConfig {
    SystemParams params;
    ModeState probe;  // coherent amplitude beta
    ModeState lo;     // coherent local oscillator alpha
    double epsilon_nominal = 0.0;

    /// Throws InvalidParams unless ||alpha||^2 >= 100 ||beta||^2; returns
    /// true when the ratio also clears the 1e4 recommended for quantitative
    /// saturation runs.
    bool validate() const;
};

HomodyneConfig make_homodyne_config(const SystemParams& p, ModeState probe, ModeState lo);

/// Frequency-shifted N-photon counting of a NOON probe, defined in the
/// rho = 1, phi = pi/4 regime where the transfer matrix is diagonal and the
/// left-port phase theta(epsilon) carries all the signal.
struct NoonCountingConfig {
    SystemParams params;
    NoonSpec spec;
    double omega_plus = 0.0;
    double epsilon_nominal = 0.0;
};

NoonCountingConfig make_noon_counting_config(const SystemParams& p, NoonSpec spec,
                                             double omega_plus);

/// One Monte Carlo batch: m single-shot trials, the per-batch MSE estimate
/// of the averaged estimator, the Cramer-Rao bound 1/(m I) and their ratio.
/// rng_seed reproduces the report bit-for-bit.
struct TrialReport {
    std::int64_t m_trials = 0;
    double epsilon_true = 0.0;
    double mse = 0.0;
    double crb = 0.0;
    double ratio = 0.0;
    double classical_fi = 0.0;
    double qfi = 0.0;
    std::uint64_t rng_seed = 0;
};

void to_json(nlohmann::json& j, const TrialReport& r);
void from_json(const nlohmann::json& j, TrialReport& r);

/// Mean homodyne difference signal at the given epsilon.
double homodyne_signal_mean(const HomodyneConfig& cfg, double epsilon);

/// d mu / d epsilon = 2 Re<K^dag alpha, A beta> at the nominal point.
double homodyne_signal_slope(const HomodyneConfig& cfg);

/// Classical Fisher information (d mu / d eps)^2 / sigma^2 of the normal
/// difference-signal model.
double homodyne_fisher(const HomodyneConfig& cfg);

/// The saturating local oscillator sqrt(n_lo) K beta / ||beta||.
ModeState homodyne_optimal_lo(const SystemParams& p, const ModeState& beta_abs, double n_lo);

/// Seeded Monte Carlo of the linearized homodyne estimator against the CRB.
TrialReport homodyne_simulate(const HomodyneConfig& cfg, double epsilon_true,
                              std::int64_t m_trials, std::uint64_t seed);

/// theta(epsilon) = 2 arg[(omega - i gamma/2)^2 - eps (eps + gamma)] at the
/// given frequency; requires rho = 1 and phi = pi/4 (mod pi).  The left-port
/// transfer element is exactly e^{i (theta + pi/2)}.
double noon_theta(const SystemParams& p, double omega);

/// d theta / d epsilon, analytic; equals A_ll(omega) in this regime.
double noon_theta_slope(const SystemParams& p, double omega);

/// Counting probabilities (P1, P2) = (cos^2, sin^2)(N theta) at omega_plus.
std::pair<double, double> noon_counting_probabilities(const NoonCountingConfig& cfg,
                                                      double epsilon);

/// Two-outcome classical Fisher information 4 N^2 (d theta / d eps)^2.
double noon_counting_fisher(const NoonCountingConfig& cfg, double epsilon);

/// Seeded Monte Carlo of the linearized counting estimator against the CRB.
/// Throws ZeroSensitivity when sin(2 N theta) vanishes at the nominal point.
TrialReport noon_simulate(const NoonCountingConfig& cfg, double epsilon_true,
                          std::int64_t m_trials, std::uint64_t seed);

/// Nearest epsilon in [lo, hi] where the fringe sits at quarter slope
/// (P1 = 1/2), a convenient unbiased operating point for noon_simulate.
double noon_quarter_fringe_epsilon(const NoonCountingConfig& cfg, double lo, double hi);

/// Minimum homodyne signal-to-noise ratio of a linear-response scan,
/// 4 lambda^2 ||beta||^2 epsilon^2 with lambda the Rayleigh quotient of the
/// probe; equals epsilon^2 times the coherent QFI for an eigenprobe.
double snr_lau_clerk(const SystemParams& p, double epsilon, const ModeState& beta_abs);

}  // namespace esqfi
