#include "esqfi/qfi.hpp"

#include <array>
#include <cmath>

#include "esqfi/gwsm.hpp"

namespace esqfi {

namespace {

std::vector<double> default_steps(double gamma) {
    return {1e-3 * gamma, 5e-4 * gamma, 2.5e-4 * gamma};
}

// Polynomial extrapolation of I(h) to h = 0; exact for the quadratic error
// model I(h) = I0 + c1 h + c2 h^2 left by the Bures-distance limit.
double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& I) {
    const std::size_t n = h.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) w *= h[j] / (h[j] - h[i]);
        }
        acc += w * I[i];
    }
    return acc;
}

std::vector<double> component_frequencies(const ModeState& s) {
    std::vector<double> out;
    out.reserve(s.components().size());
    for (const auto& c : s.components()) out.push_back(c.omega);
    return out;
}

std::vector<double> noon_frequencies(const NoonSpec& spec) {
    std::vector<double> out = component_frequencies(spec.psi1);
    for (const auto& c : spec.psi2.components()) out.push_back(c.omega);
    return out;
}

void check_steps(const std::vector<double>& steps) {
    if (steps.size() < 2) throw InvalidParams("fidelity oracle: need at least two steps");
    for (double s : steps) {
        if (!(s > 0.0)) throw InvalidParams("fidelity oracle: steps must be positive");
    }
}

}  // namespace

std::string to_string(QfiMethod m) {
    return m == QfiMethod::generator ? "generator" : "fidelity_limit";
}

QfiResult coherent_qfi(const SystemParams& p, const ModeState& beta) {
    if (beta.kind() != StateKind::coherent_amplitude) {
        throw InvalidParams("coherent_qfi: probe must be a coherent amplitude");
    }
    const ModeState abeta =
        apply_matrix_field([&](double w) { return gwsm_a(p, w); }, beta);
    QfiResult r;
    r.value = 4.0 * abeta.norm2();
    r.method = QfiMethod::generator;
    r.probe = beta;
    r.omega_points = component_frequencies(beta);
    r.epsilon_at = p.epsilon;
    return r;
}

QfiResult coherent_qfi_fidelity_oracle(const SystemParams& p, const ModeState& beta,
                                       std::vector<double> steps) {
    if (beta.kind() != StateKind::coherent_amplitude) {
        throw InvalidParams("coherent_qfi_fidelity_oracle: probe must be a coherent amplitude");
    }
    if (steps.empty()) steps = default_steps(p.gamma);
    check_steps(steps);

    const double n2 = beta.norm2();
    const auto bures_ratio = [&](double de) {
        // log sqrt(F) = -||beta||^2 + Re<K beta, K' beta>
        const ModeState out0 =
            apply_matrix_field([&](double w) { return transfer_k(p, w); }, beta);
        const ModeState out1 = apply_matrix_field(
            [&](double w) { return transfer_k(p.with_epsilon(p.epsilon + de), w); }, beta);
        const double log_sqrt_f = inner(out0, out1).real() - n2;
        // I(de) = 4 d_B^2 / de^2 with d_B^2 = 2 (1 - sqrt(F))
        return -8.0 * std::expm1(log_sqrt_f) / (de * de);
    };

    std::vector<double> vals;
    vals.reserve(steps.size());
    for (double s : steps) vals.push_back(bures_ratio(s));

    QfiResult r;
    r.value = extrapolate_to_zero(steps, vals);
    r.method = QfiMethod::fidelity_limit;
    r.probe = beta;
    r.omega_points = component_frequencies(beta);
    r.epsilon_at = p.epsilon;
    return r;
}

QfiResult noon_qfi(const SystemParams& p, const NoonSpec& spec) {
    spec.validate();
    const int n = spec.n_photons;
    const auto a_field = [&](double w) { return gwsm_a(p, w); };
    const std::array<const ModeState*, 2> psi = {&spec.psi1, &spec.psi2};
    std::array<ModeState, 2> apsi = {apply_matrix_field(a_field, spec.psi1),
                                     apply_matrix_field(a_field, spec.psi2)};

    // Overlap powers <psi_n, psi_m>^k for orthonormal modes: 1 on the
    // diagonal, and 1 off the diagonal only for k = 0.
    const auto ovl_pow = [](int k, int i, int j) { return (i == j || k == 0) ? 1.0 : 0.0; };

    cd mean(0.0, 0.0);
    cd msq(0.0, 0.0);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const cd a_ij = inner(*psi[i], apsi[j]);
            const cd q_ij = inner(apsi[i], apsi[j]);
            mean += 0.5 * static_cast<double>(n) * a_ij * ovl_pow(n - 1, i, j);
            msq += 0.5 * (static_cast<double>(n) * q_ij * ovl_pow(n - 1, i, j) +
                          static_cast<double>(n) * (n - 1) * a_ij * a_ij * ovl_pow(n - 2, i, j));
        }
    }
    const double variance = msq.real() - mean.real() * mean.real();

    QfiResult r;
    r.value = std::max(4.0 * variance, 0.0);
    r.method = QfiMethod::generator;
    r.probe = spec;
    r.omega_points = noon_frequencies(spec);
    r.epsilon_at = p.epsilon;
    return r;
}

cd noon_overlap_oracle(const SystemParams& p, const NoonSpec& spec, double delta_eps) {
    spec.validate();
    const auto k0 = [&](double w) { return transfer_k(p, w); };
    const auto k1 = [&](double w) { return transfer_k(p.with_epsilon(p.epsilon + delta_eps), w); };
    const std::array<ModeState, 2> out0 = {apply_matrix_field(k0, spec.psi1),
                                           apply_matrix_field(k0, spec.psi2)};
    const std::array<ModeState, 2> out1 = {apply_matrix_field(k1, spec.psi1),
                                           apply_matrix_field(k1, spec.psi2)};
    cd total(0.0, 0.0);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            total += std::pow(inner(out0[i], out1[j]), spec.n_photons);
        }
    }
    return 0.5 * total;
}

QfiResult noon_qfi_overlap_oracle(const SystemParams& p, const NoonSpec& spec,
                                  std::vector<double> steps) {
    if (steps.empty()) steps = default_steps(p.gamma);
    check_steps(steps);

    const auto bures_ratio = [&](double de) {
        const cd o = noon_overlap_oracle(p, spec, de);
        const double y = 1.0 - std::norm(o);  // 1 - |O|^2
        const double one_minus_abs = y / (1.0 + std::sqrt(std::max(1.0 - y, 0.0)));
        return 8.0 * one_minus_abs / (de * de);
    };
    std::vector<double> vals;
    vals.reserve(steps.size());
    for (double s : steps) vals.push_back(bures_ratio(s));

    QfiResult r;
    r.value = extrapolate_to_zero(steps, vals);
    r.method = QfiMethod::fidelity_limit;
    r.probe = spec;
    r.omega_points = noon_frequencies(spec);
    r.epsilon_at = p.epsilon;
    return r;
}

double oqfi_from_optimum(const FrequencyOptimum& fo, ProbeKind kind, double photons) {
    if (kind == ProbeKind::coherent) {
        return 4.0 * fo.lambda_abs * fo.lambda_abs * photons;
    }
    const double spread = fo.lambda_max - fo.lambda_min;
    return photons * photons * spread * spread;
}

QfiResult oqfi_value(const SystemParams& p, ProbeKind kind, double photons) {
    const FrequencyOptimum fo = optimize_spectrum(p);
    QfiResult r;
    r.value = oqfi_from_optimum(fo, kind, photons);
    r.method = QfiMethod::generator;
    r.epsilon_at = p.epsilon;
    if (kind == ProbeKind::coherent) {
        r.probe = optimal_coherent_probe(p, photons);
        r.omega_points = {std::abs(fo.lambda_max) >= std::abs(fo.lambda_min) ? fo.omega_max
                                                                             : fo.omega_min};
    } else {
        r.probe = optimal_noon_probe(p, static_cast<int>(photons));
        r.omega_points = {fo.omega_min, fo.omega_max};
    }
    return r;
}

void to_json(nlohmann::json& j, const QfiResult& r) {
    j = {{"value", r.value},
         {"method", to_string(r.method)},
         {"omega_points", r.omega_points},
         {"epsilon_at", r.epsilon_at}};
    if (std::holds_alternative<ModeState>(r.probe)) {
        j["probe_kind"] = "coherent";
        j["probe"] = std::get<ModeState>(r.probe);
    } else {
        j["probe_kind"] = "noon";
        j["probe"] = std::get<NoonSpec>(r.probe);
    }
}

void from_json(const nlohmann::json& j, QfiResult& r) {
    j.at("value").get_to(r.value);
    const std::string method = j.at("method").get<std::string>();
    if (method == "generator") {
        r.method = QfiMethod::generator;
    } else if (method == "fidelity_limit") {
        r.method = QfiMethod::fidelity_limit;
    } else {
        throw InvalidParams("QfiResult: unknown method " + method);
    }
    j.at("omega_points").get_to(r.omega_points);
    j.at("epsilon_at").get_to(r.epsilon_at);
    if (j.at("probe_kind").get<std::string>() == "coherent") {
        r.probe = j.at("probe").get<ModeState>();
    } else {
        r.probe = j.at("probe").get<NoonSpec>();
    }
}

}  // namespace esqfi
