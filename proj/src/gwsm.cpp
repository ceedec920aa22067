#include "esqfi/gwsm.hpp"

#include <cmath>

namespace esqfi {

namespace {

// Shared hard floor for the closed-form denominator |det(h_tilde - w I)|^2.
double check_denominator(const SystemParams& p, double omega, const char* where) {
    const cd den = resolvent_denominator(p, omega);
    const cd zeta(omega, 0.5 * p.gamma);
    const double scale = std::norm(zeta) + p.epsilon * p.epsilon +
                         std::abs(p.epsilon) * p.gamma * p.rho;
    if (std::abs(den) <= 1e-14 * std::max(scale, 1e-300)) {
        throw SingularDenominator(std::string(where) + ": at a resolvent pole",
                                  std::abs(den));
    }
    return std::norm(den);
}

}  // namespace

CMat2 gwsm_a(const SystemParams& p, double omega) {
    const double d2 = check_denominator(p, omega, "gwsm_a");
    const double g = p.gamma;
    const double e = p.epsilon;
    const cd e2c = std::polar(1.0, -2.0 * p.phi);
    const cd zeta(omega, 0.5 * g);

    const cd x = -g * (e * (1.0 + p.rho * p.rho) * zeta +
                       p.rho * e2c * (zeta * zeta + e * e));
    const double all = 2.0 * x.real() / d2;
    const double arr = -g * e * p.tau * p.tau * 2.0 * omega / d2;
    const cd alr = -g * p.tau * std::polar(1.0, p.phi) *
                   (e * e + 2.0 * e * p.rho * e2c * zeta + std::norm(zeta)) / d2;
    return {cd(all, 0.0), alr, std::conj(alr), cd(arr, 0.0)};
}

CMat2 gwsm_a_definition(const SystemParams& p, double omega) {
    check_denominator(p, omega, "gwsm_a_definition");
    const ModelMatrices m = build_model(p);
    const CMat2 r = resolvent(p, omega);
    const CMat2 v{cd(0, 0), cd(1, 0), cd(1, 0), cd(0, 0)};
    return cd(-1.0, 0.0) * (adjoint(m.b) * adjoint(r) * v * r * m.b);
}

CMat2 gwsm_from_k_derivative(const SystemParams& p, double omega, double h) {
    if (h <= 0.0) h = 1e-5 * p.gamma;
    const CMat2 k0 = transfer_k(p, omega);
    const CMat2 kp = transfer_k(p.with_epsilon(p.epsilon + h), omega);
    const CMat2 km = transfer_k(p.with_epsilon(p.epsilon - h), omega);
    const CMat2 m = cd(0.0, -1.0) * (adjoint(k0) * (cd(1.0 / (2.0 * h), 0.0) * (kp - km)));
    return 0.5 * (m + adjoint(m));
}

std::pair<double, double> gwsm_trace_det(const SystemParams& p, double omega) {
    const double d2 = check_denominator(p, omega, "gwsm_trace_det");
    const double g = p.gamma;
    const double e = p.epsilon;
    const cd e2c = std::polar(1.0, -2.0 * p.phi);
    const cd zeta(omega, 0.5 * g);

    const cd x = -g * (2.0 * e * zeta + p.rho * e2c * (zeta * zeta + e * e));
    const double tr = 2.0 * x.real() / d2;
    const double det = -g * g * p.tau * p.tau / d2;
    return {tr, det};
}

GwsmSpectrum gwsm_spectrum(const SystemParams& p, double omega) {
    const HermEig2 eig = eig_herm2(gwsm_a(p, omega));
    return {eig.lambda_minus, eig.lambda_plus, eig.v_minus, eig.v_plus,
            near_pole(p, omega)};
}

std::pair<double, double> lambda0_closed_form(const SystemParams& p, double omega) {
    if (p.epsilon != 0.0) {
        throw InvalidParams("lambda0_closed_form: requires epsilon == 0");
    }
    const cd zeta(omega, 0.5 * p.gamma);
    const double z2 = std::norm(zeta);
    const double c = (std::polar(1.0, 2.0 * p.phi) * std::conj(zeta) / zeta).real();
    const double s = std::sqrt(p.tau * p.tau + p.rho * p.rho * c * c);
    const double pref = p.gamma / z2;
    return {-pref * (p.rho * c + s), -pref * (p.rho * c - s)};
}

}  // namespace esqfi
