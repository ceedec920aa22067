#include "esqfi/resonator.hpp"

#include <cmath>
#include <numbers>

namespace esqfi {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

CMat2 h_tilde_of(const SystemParams& p) {
    const cd e2 = std::polar(1.0, 2.0 * p.phi);
    const cd diag(0.0, -0.5 * p.gamma);
    return {diag, cd(p.epsilon, 0.0), p.epsilon - cd(0.0, 1.0) * p.gamma * p.rho * e2, diag};
}

CMat2 h_minus_omega(const SystemParams& p, double omega) {
    CMat2 m = h_tilde_of(p);
    m.ll -= omega;
    m.rr -= omega;
    return m;
}

}  // namespace

SystemParams SystemParams::make(double gamma, double rho, double phi, double epsilon) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidParams("SystemParams: gamma must be positive and finite");
    }
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw InvalidParams("SystemParams: rho must lie in [0, 1]");
    }
    if (!std::isfinite(phi) || !std::isfinite(epsilon)) {
        throw InvalidParams("SystemParams: phi and epsilon must be finite");
    }
    SystemParams p;
    p.gamma = gamma;
    p.rho = rho;
    p.tau = std::sqrt(1.0 - rho * rho);
    p.phi = std::fmod(phi, two_pi);
    if (p.phi < 0.0) p.phi += two_pi;
    p.epsilon = epsilon;
    return p;
}

ModelMatrices build_model(const SystemParams& p) {
    const cd e1 = std::polar(1.0, p.phi);
    const cd e2 = std::polar(1.0, 2.0 * p.phi);
    const double sg = std::sqrt(p.gamma);

    ModelMatrices m;
    m.s = {p.rho * e2, p.tau * e1, p.tau * e1, cd(-p.rho, 0.0)};
    m.b = {cd(sg, 0.0), cd(0.0, 0.0), sg * p.rho * e2, sg * p.tau * e1};
    m.h_tilde = h_tilde_of(p);
    m.h_eff = {cd(0.0, 0.0),
               p.epsilon + cd(0.0, 0.5) * p.gamma * p.rho * std::conj(e2),
               p.epsilon - cd(0.0, 0.5) * p.gamma * p.rho * e2,
               cd(0.0, 0.0)};

    // Construction-time consistency checks.
    const CMat2 bbd = m.b * adjoint(m.b);
    const CMat2 im_h = cd(0.0, -0.5) * (m.h_tilde - adjoint(m.h_tilde));
    if ((im_h + 0.5 * bbd).fnorm() > 1e-12 * std::max(1.0, bbd.fnorm())) {
        throw std::logic_error("build_model: Im(h_tilde) != -(1/2) b b^dag");
    }
    if ((m.h_tilde - (m.h_eff - cd(0.0, 0.5) * bbd)).fnorm() >
        1e-12 * std::max(1.0, m.h_tilde.fnorm())) {
        throw std::logic_error("build_model: h_tilde != h_eff - (i/2) b b^dag");
    }
    if (!m.s.is_unitary(1e-12)) {
        throw std::logic_error("build_model: s is not unitary");
    }
    return m;
}

std::pair<cd, cd> omega_eigenvalues(const SystemParams& p) {
    const cd e2 = std::polar(1.0, 2.0 * p.phi);
    cd disc = cd(p.epsilon * p.epsilon, 0.0) -
              cd(0.0, 1.0) * p.epsilon * p.gamma * p.rho * e2;
    // Principal branch; a signed-zero imaginary part would flip the cut side.
    if (disc.imag() == 0.0) disc = cd(disc.real(), +0.0);
    const cd root = std::sqrt(disc);
    const cd base(0.0, -0.5 * p.gamma);
    return {base + root, base - root};
}

cd resolvent_denominator(const SystemParams& p, double omega) {
    const cd e2 = std::polar(1.0, 2.0 * p.phi);
    const cd zeta(omega, 0.5 * p.gamma);
    return zeta * zeta -
           p.epsilon * (cd(p.epsilon, 0.0) - cd(0.0, 1.0) * p.gamma * p.rho * e2);
}

bool near_pole(const SystemParams& p, double omega) {
    const double g2 = p.gamma * p.gamma;
    return std::norm(resolvent_denominator(p, omega)) < 1e-12 * g2 * g2;
}

CMat2 resolvent(const SystemParams& p, double omega) {
    return inverse2(h_minus_omega(p, omega));
}

CMat2 transfer_k(const SystemParams& p, double omega) {
    const ModelMatrices m = build_model(p);
    const CMat2 r = inverse2(h_minus_omega(p, omega));
    return m.s * (CMat2::identity() + cd(0.0, 1.0) * (adjoint(m.b) * r * m.b));
}

CMat2 transfer_k_closed_form(const SystemParams& p, double omega) {
    const cd e1 = std::polar(1.0, p.phi);
    const cd e2 = std::polar(1.0, 2.0 * p.phi);
    const double g = p.gamma;
    const double e = p.epsilon;
    const cd den = resolvent_denominator(p, omega);

    const double den_scale =
        std::norm(cd(omega, 0.5 * g)) + e * e + std::abs(e) * g * p.rho;
    if (std::abs(den) <= 1e-14 * std::max(den_scale, 1e-300)) {
        throw SingularDenominator("transfer_k_closed_form: at a resolvent pole",
                                  std::abs(den));
    }

    const cd mig = cd(0.0, -g);
    const cd kll = mig * (e * (1.0 + p.rho * p.rho * e2 * e2) + 2.0 * p.rho * e2 * omega) / den +
                   p.rho * e2;
    const cd klr = mig * p.tau * e1 * (cd(omega, 0.5 * g) + e * p.rho * e2) / den +
                   p.tau * e1;
    const cd krr = mig * e * p.tau * p.tau * e2 / den - p.rho;
    return {kll, klr, klr, krr};
}

}  // namespace esqfi
