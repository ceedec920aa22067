#include "esqfi/estimation.hpp"

#include <cmath>
#include <vector>

#include "esqfi/gwsm.hpp"
#include "esqfi/parallel.hpp"
#include "esqfi/qfi.hpp"
#include "esqfi/rng.hpp"

namespace esqfi {

namespace {

// Deterministic reduction: workers fill disjoint slots, summation is a
// single ordered pass.
double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

void require_counting_regime(const SystemParams& p) {
    const cd e2 = std::polar(1.0, 2.0 * p.phi);
    if (std::abs(p.rho - 1.0) > 1e-9 || std::abs(e2 - cd(0.0, 1.0)) > 1e-9) {
        throw InvalidParams("noon counting: requires rho = 1 and phi = pi/4 (mod pi)");
    }
}

cd theta_argument(const SystemParams& p, double omega) {
    const cd zc(omega, -0.5 * p.gamma);
    return zc * zc - p.epsilon * (p.epsilon + p.gamma);
}

}  // namespace

bool HomodyneConfig::validate() const {
    if (probe.kind() != StateKind::coherent_amplitude ||
        lo.kind() != StateKind::coherent_amplitude) {
        throw InvalidParams("HomodyneConfig: probe and LO must be coherent amplitudes");
    }
    const double nb = probe.norm2();
    const double na = lo.norm2();
    if (nb <= 0.0) throw InvalidParams("HomodyneConfig: empty probe");
    if (na < 100.0 * nb) {
        throw InvalidParams("HomodyneConfig: LO must carry >= 100x the probe photons");
    }
    return na >= 1e4 * nb;
}

HomodyneConfig make_homodyne_config(const SystemParams& p, ModeState probe, ModeState lo) {
    HomodyneConfig cfg{p, std::move(probe), std::move(lo), p.epsilon};
    cfg.validate();
    return cfg;
}

NoonCountingConfig make_noon_counting_config(const SystemParams& p, NoonSpec spec,
                                             double omega_plus) {
    require_counting_regime(p);
    spec.validate();
    return {p, std::move(spec), omega_plus, p.epsilon};
}

void to_json(nlohmann::json& j, const TrialReport& r) {
    j = {{"m_trials", r.m_trials}, {"epsilon_true", r.epsilon_true}, {"mse", r.mse},
         {"crb", r.crb},           {"ratio", r.ratio},               {"classical_fi", r.classical_fi},
         {"qfi", r.qfi},           {"rng_seed", r.rng_seed}};
}

void from_json(const nlohmann::json& j, TrialReport& r) {
    j.at("m_trials").get_to(r.m_trials);
    j.at("epsilon_true").get_to(r.epsilon_true);
    j.at("mse").get_to(r.mse);
    j.at("crb").get_to(r.crb);
    j.at("ratio").get_to(r.ratio);
    j.at("classical_fi").get_to(r.classical_fi);
    j.at("qfi").get_to(r.qfi);
    j.at("rng_seed").get_to(r.rng_seed);
}

double homodyne_signal_mean(const HomodyneConfig& cfg, double epsilon) {
    const SystemParams p = cfg.params.with_epsilon(epsilon);
    const ModeState out =
        apply_matrix_field([&](double w) { return transfer_k(p, w); }, cfg.probe);
    return 2.0 * inner(cfg.lo, out).imag();
}

double homodyne_signal_slope(const HomodyneConfig& cfg) {
    const SystemParams p = cfg.params.with_epsilon(cfg.epsilon_nominal);
    const ModeState kd_alpha =
        apply_matrix_field([&](double w) { return adjoint(transfer_k(p, w)); }, cfg.lo);
    const ModeState a_beta =
        apply_matrix_field([&](double w) { return gwsm_a(p, w); }, cfg.probe);
    return 2.0 * inner(kd_alpha, a_beta).real();
}

double homodyne_fisher(const HomodyneConfig& cfg) {
    const double dmu = homodyne_signal_slope(cfg);
    const double sigma2 = cfg.lo.norm2() + cfg.probe.norm2();
    return dmu * dmu / sigma2;
}

ModeState homodyne_optimal_lo(const SystemParams& p, const ModeState& beta_abs, double n_lo) {
    if (!(n_lo >= 0.0)) throw InvalidParams("homodyne_optimal_lo: n_lo must be >= 0");
    if (n_lo == 0.0) return ModeState(StateKind::coherent_amplitude, {});
    const double nb = beta_abs.norm();
    if (nb <= 0.0) throw InvalidParams("homodyne_optimal_lo: empty probe");
    ModeState out = apply_matrix_field([&](double w) { return transfer_k(p, w); }, beta_abs);
    return (std::sqrt(n_lo) / nb) * out;
}

TrialReport homodyne_simulate(const HomodyneConfig& cfg, double epsilon_true,
                              std::int64_t m_trials, std::uint64_t seed) {
    if (m_trials < 1) throw InvalidParams("homodyne_simulate: m_trials must be >= 1");
    cfg.validate();

    const double mu_nom = homodyne_signal_mean(cfg, cfg.epsilon_nominal);
    const double dmu = homodyne_signal_slope(cfg);
    const double sigma2 = cfg.lo.norm2() + cfg.probe.norm2();
    const double sd = std::sqrt(sigma2);
    if (std::abs(dmu) <= 1e-12 * std::max(1.0, sd)) {
        throw ZeroSensitivity("homodyne_simulate: signal slope vanishes at nominal point");
    }
    const double mu_true = homodyne_signal_mean(cfg, epsilon_true);

    std::vector<double> sq(static_cast<std::size_t>(m_trials));
    parallel_for(sq.size(), [&](std::size_t t0, std::size_t t1) {
        for (std::size_t t = t0; t < t1; ++t) {
            TrialRng rng(seed, t);
            const double x = mu_true + sd * rng.normal();
            const double eps_hat = cfg.epsilon_nominal + (x - mu_nom) / dmu;
            const double d = eps_hat - epsilon_true;
            sq[t] = d * d;
        }
    });

    const double s2 = mean_of(sq);  // per-shot MSE estimate
    const double fi = dmu * dmu / sigma2;

    TrialReport rep;
    rep.m_trials = m_trials;
    rep.epsilon_true = epsilon_true;
    rep.mse = s2 / static_cast<double>(m_trials);
    rep.crb = 1.0 / (static_cast<double>(m_trials) * fi);
    rep.ratio = s2 * fi;
    rep.classical_fi = fi;
    rep.qfi = coherent_qfi(cfg.params.with_epsilon(cfg.epsilon_nominal), cfg.probe).value;
    rep.rng_seed = seed;
    return rep;
}

double noon_theta(const SystemParams& p, double omega) {
    require_counting_regime(p);
    const cd u = theta_argument(p, omega);
    const double scale = p.gamma * p.gamma + omega * omega + p.epsilon * p.epsilon;
    if (std::abs(u) <= 1e-14 * scale) {
        throw UndefinedPhase("noon_theta: phase argument vanishes");
    }
    return 2.0 * std::arg(u);
}

double noon_theta_slope(const SystemParams& p, double omega) {
    require_counting_regime(p);
    const cd u = theta_argument(p, omega);
    const double scale = p.gamma * p.gamma + omega * omega + p.epsilon * p.epsilon;
    if (std::abs(u) <= 1e-14 * scale) {
        throw UndefinedPhase("noon_theta_slope: phase argument vanishes");
    }
    return 2.0 * (-(2.0 * p.epsilon + p.gamma) / u).imag();
}

std::pair<double, double> noon_counting_probabilities(const NoonCountingConfig& cfg,
                                                      double epsilon) {
    const double th = noon_theta(cfg.params.with_epsilon(epsilon), cfg.omega_plus);
    const double c = std::cos(cfg.spec.n_photons * th);
    const double p1 = c * c;
    return {p1, 1.0 - p1};
}

double noon_counting_fisher(const NoonCountingConfig& cfg, double epsilon) {
    const double slope = noon_theta_slope(cfg.params.with_epsilon(epsilon), cfg.omega_plus);
    const double n = cfg.spec.n_photons;
    return 4.0 * n * n * slope * slope;
}

TrialReport noon_simulate(const NoonCountingConfig& cfg, double epsilon_true,
                          std::int64_t m_trials, std::uint64_t seed) {
    if (m_trials < 1) throw InvalidParams("noon_simulate: m_trials must be >= 1");
    const int n = cfg.spec.n_photons;

    const SystemParams p_nom = cfg.params.with_epsilon(cfg.epsilon_nominal);
    const double th_nom = noon_theta(p_nom, cfg.omega_plus);
    if (std::abs(std::sin(2.0 * n * th_nom)) < 1e-6) {
        throw ZeroSensitivity("noon_simulate: sin(2 N theta) vanishes at nominal point");
    }
    const double p1_nom = noon_counting_probabilities(cfg, cfg.epsilon_nominal).first;
    const double dp1 = -n * std::sin(2.0 * n * th_nom) * noon_theta_slope(p_nom, cfg.omega_plus);
    const double p1_true = noon_counting_probabilities(cfg, epsilon_true).first;

    std::vector<double> sq(static_cast<std::size_t>(m_trials));
    parallel_for(sq.size(), [&](std::size_t t0, std::size_t t1) {
        for (std::size_t t = t0; t < t1; ++t) {
            TrialRng rng(seed, t);
            const double y = rng.bernoulli(p1_true) ? 1.0 : 0.0;
            const double eps_hat = cfg.epsilon_nominal + (y - p1_nom) / dp1;
            const double d = eps_hat - epsilon_true;
            sq[t] = d * d;
        }
    });

    const double s2 = mean_of(sq);
    const double fi = dp1 * dp1 / (p1_nom * (1.0 - p1_nom));

    TrialReport rep;
    rep.m_trials = m_trials;
    rep.epsilon_true = epsilon_true;
    rep.mse = s2 / static_cast<double>(m_trials);
    rep.crb = 1.0 / (static_cast<double>(m_trials) * fi);
    rep.ratio = s2 * fi;
    rep.classical_fi = fi;
    rep.qfi = noon_qfi(p_nom, cfg.spec).value;
    rep.rng_seed = seed;
    return rep;
}

double noon_quarter_fringe_epsilon(const NoonCountingConfig& cfg, double lo, double hi) {
    const auto f = [&](double e) {
        return noon_counting_probabilities(cfg, e).first - 0.5;
    };
    // Scan for a sign change, then bisect.
    const int scan = 512;
    double a = lo, b = hi;
    double fa = f(a);
    bool found = false;
    for (int i = 1; i <= scan; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / scan;
        const double fx = f(x);
        if (fa == 0.0) return a;
        if (fa * fx <= 0.0) {
            b = x;
            found = true;
            break;
        }
        a = x;
        fa = fx;
    }
    if (!found) {
        throw InvalidParams("noon_quarter_fringe_epsilon: no half-probability point in range");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (fa * fm <= 0.0) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

double snr_lau_clerk(const SystemParams& p, double epsilon, const ModeState& beta_abs) {
    const double n2 = beta_abs.norm2();
    if (n2 <= 0.0) return 0.0;
    const ModeState abeta =
        apply_matrix_field([&](double w) { return gwsm_a(p, w); }, beta_abs);
    const double lambda = inner(beta_abs, abeta).real() / n2;
    return 4.0 * lambda * lambda * n2 * epsilon * epsilon;
}

}  // namespace esqfi
