#include "esqfi/states.hpp"

#include <algorithm>
#include <cmath>

#include "esqfi/gwsm.hpp"
#include "esqfi/optimize.hpp"

namespace esqfi {

namespace {

constexpr double kFreqMergeTol = 1e-12;

bool same_frequency(double a, double b) {
    return std::abs(a - b) <= kFreqMergeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::string to_string(StateKind k) {
    return k == StateKind::coherent_amplitude ? "coherent_amplitude" : "single_photon_mode";
}

std::string to_string(ProbeKind k) {
    return k == ProbeKind::coherent ? "coherent" : "noon";
}

StateKind state_kind_from_string(const std::string& s) {
    if (s == "coherent_amplitude") return StateKind::coherent_amplitude;
    if (s == "single_photon_mode") return StateKind::single_photon_mode;
    throw InvalidParams("unknown state kind: " + s);
}

ProbeKind probe_kind_from_string(const std::string& s) {
    if (s == "coherent") return ProbeKind::coherent;
    if (s == "noon") return ProbeKind::noon;
    throw InvalidParams("unknown probe kind: " + s);
}

ModeState::ModeState(StateKind kind, std::vector<ModeComponent> components)
    : kind_(kind) {
    for (const auto& c : components) {
        if (!std::isfinite(c.omega) || !c.port.finite()) {
            throw InvalidParams("ModeState: non-finite component");
        }
    }
    std::sort(components.begin(), components.end(),
              [](const ModeComponent& a, const ModeComponent& b) { return a.omega < b.omega; });
    for (auto& c : components) {
        if (!components_.empty() && same_frequency(components_.back().omega, c.omega)) {
            components_.back().port += c.port;
        } else {
            components_.push_back(c);
        }
    }
}

double ModeState::norm2() const {
    double s = 0.0;
    for (const auto& c : components_) s += c.port.norm2();
    return s;
}

void ModeState::validate() const {
    if (kind_ == StateKind::single_photon_mode && std::abs(norm2() - 1.0) > 1e-12) {
        throw InvalidParams("ModeState: single-photon mode is not unit normalized");
    }
}

ModeState& ModeState::operator*=(cd s) {
    for (auto& c : components_) c.port *= s;
    return *this;
}

cd inner(const ModeState& a, const ModeState& b) {
    cd sum(0.0, 0.0);
    const auto& ca = a.components();
    const auto& cb = b.components();
    std::size_t i = 0, j = 0;
    while (i < ca.size() && j < cb.size()) {
        if (same_frequency(ca[i].omega, cb[j].omega)) {
            sum += inner(ca[i].port, cb[j].port);
            ++i;
            ++j;
        } else if (ca[i].omega < cb[j].omega) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

ModeState apply_matrix_field(const std::function<CMat2(double)>& m_of_omega,
                             const ModeState& s) {
    std::vector<ModeComponent> out;
    out.reserve(s.components().size());
    for (const auto& c : s.components()) {
        out.push_back({c.omega, m_of_omega(c.omega) * c.port});
    }
    return ModeState(s.kind(), std::move(out));
}

ModeState optimal_coherent_probe(const SystemParams& p, double photon_number) {
    if (!(photon_number >= 0.0) || !std::isfinite(photon_number)) {
        throw InvalidParams("optimal_coherent_probe: photon number must be >= 0");
    }
    if (photon_number == 0.0) {
        return ModeState(StateKind::coherent_amplitude, {});
    }
    const FrequencyOptimum fo = optimize_spectrum(p);
    const double omega_abs =
        std::abs(fo.lambda_max) >= std::abs(fo.lambda_min) ? fo.omega_max : fo.omega_min;
    const GwsmSpectrum s = gwsm_spectrum(p, omega_abs);
    const CVec2 v = std::abs(s.lambda_plus) >= std::abs(s.lambda_minus) ? s.v_plus : s.v_minus;
    return ModeState(StateKind::coherent_amplitude,
                     {{omega_abs, std::sqrt(photon_number) * v}});
}

NoonSpec optimal_noon_probe(const SystemParams& p, int n_photons) {
    if (n_photons < 1) {
        throw InvalidParams("optimal_noon_probe: n_photons must be >= 1");
    }
    const FrequencyOptimum fo = optimize_spectrum(p);

    NoonSpec spec;
    spec.n_photons = n_photons;
    if (same_frequency(fo.omega_min, fo.omega_max)) {
        // Degenerate in frequency: the two modes are the orthogonal
        // eigenvectors of A at the shared optimum.
        const GwsmSpectrum s = gwsm_spectrum(p, fo.omega_min);
        spec.psi1 = ModeState(StateKind::single_photon_mode, {{fo.omega_min, s.v_minus}});
        spec.psi2 = ModeState(StateKind::single_photon_mode, {{fo.omega_min, s.v_plus}});
    } else {
        // Pick one eigenpair per frequency maximizing the eigenvalue spread;
        // the reported (lambda, omega) labels may be mirror-canonicalized, so
        // the pointwise spectra decide.
        const GwsmSpectrum s1 = gwsm_spectrum(p, fo.omega_min);
        const GwsmSpectrum s2 = gwsm_spectrum(p, fo.omega_max);
        struct Pair {
            double lambda;
            const CVec2* v;
        };
        const Pair at_min[2] = {{s1.lambda_minus, &s1.v_minus}, {s1.lambda_plus, &s1.v_plus}};
        const Pair at_max[2] = {{s2.lambda_plus, &s2.v_plus}, {s2.lambda_minus, &s2.v_minus}};
        double best = -1.0;
        const CVec2* v1 = at_min[0].v;
        const CVec2* v2 = at_max[0].v;
        for (const Pair& a : at_min) {
            for (const Pair& b : at_max) {
                const double spread = std::abs(b.lambda - a.lambda);
                if (spread > best) {
                    best = spread;
                    v1 = a.v;
                    v2 = b.v;
                }
            }
        }
        spec.psi1 = ModeState(StateKind::single_photon_mode, {{fo.omega_min, *v1}});
        spec.psi2 = ModeState(StateKind::single_photon_mode, {{fo.omega_max, *v2}});
    }
    spec.validate();
    return spec;
}

void NoonSpec::validate() const {
    if (n_photons < 1) throw InvalidParams("NoonSpec: n_photons must be >= 1");
    psi1.validate();
    psi2.validate();
    if (psi1.kind() != StateKind::single_photon_mode ||
        psi2.kind() != StateKind::single_photon_mode) {
        throw InvalidParams("NoonSpec: modes must be single-photon mode functions");
    }
    if (std::abs(inner(psi1, psi2)) > 1e-12) {
        throw InvalidParams("NoonSpec: modes are not orthogonal");
    }
}

void to_json(nlohmann::json& j, const ModeState& s) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : s.components()) {
        comps.push_back({{"omega", c.omega},
                         {"port", {c.port.l.real(), c.port.l.imag(),
                                   c.port.r.real(), c.port.r.imag()}}});
    }
    j = {{"kind", to_string(s.kind())}, {"components", comps}};
}

void from_json(const nlohmann::json& j, ModeState& s) {
    std::vector<ModeComponent> comps;
    for (const auto& c : j.at("components")) {
        const auto& port = c.at("port");
        if (port.size() != 4) throw InvalidParams("ModeState: port must have 4 reals");
        comps.push_back({c.at("omega").get<double>(),
                         CVec2{cd(port[0].get<double>(), port[1].get<double>()),
                               cd(port[2].get<double>(), port[3].get<double>())}});
    }
    s = ModeState(state_kind_from_string(j.at("kind").get<std::string>()), std::move(comps));
}

void to_json(nlohmann::json& j, const NoonSpec& s) {
    j = {{"psi1", s.psi1}, {"psi2", s.psi2}, {"n_photons", s.n_photons}};
}

void from_json(const nlohmann::json& j, NoonSpec& s) {
    j.at("psi1").get_to(s.psi1);
    j.at("psi2").get_to(s.psi2);
    s.n_photons = j.at("n_photons").get<int>();
    s.validate();
}

}  // namespace esqfi
