#include <numbers>
#include <random>

#include <doctest.h>

#include "esqfi/resonator.hpp"
#include "test_support.hpp"

using namespace esqfi;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(SystemParams::make(0.0, 0.5, 0, 0), InvalidParams);
    CHECK_THROWS_AS(SystemParams::make(1.0, -0.1, 0, 0), InvalidParams);
    CHECK_THROWS_AS(SystemParams::make(1.0, 1.1, 0, 0), InvalidParams);
    CHECK_THROWS_AS(SystemParams::make(1.0, 0.5, std::nan(""), 0), InvalidParams);

    const SystemParams p = SystemParams::make(1.0, 0.6, -pi / 2, 0.1);
    CHECK(p.tau == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(p.phi == doctest::Approx(1.5 * pi).epsilon(1e-15));  // canonical [0, 2pi)
}

TEST_CASE("build_model pinned matrices") {
    const SystemParams dp = SystemParams::make(1, 0, 0, 0);
    const ModelMatrices m = build_model(dp);
    CHECK(std::abs(m.h_tilde.ll - cd(0, -0.5)) < 1e-15);
    CHECK(std::abs(m.h_tilde.rr - cd(0, -0.5)) < 1e-15);
    CHECK(std::abs(m.h_tilde.lr) < 1e-15);
    CHECK(std::abs(m.h_tilde.rl) < 1e-15);
    CHECK(std::abs(m.s.ll) < 1e-15);
    CHECK(std::abs(m.s.lr - cd(1, 0)) < 1e-15);
    CHECK(std::abs(m.s.rl - cd(1, 0)) < 1e-15);
    CHECK(std::abs(m.s.rr) < 1e-15);

    // full reflection: lower-left of h_tilde is -i gamma rho e^{2 i phi}
    const ModelMatrices m1 = build_model(SystemParams::make(1, 1, 0, 0));
    CHECK(std::abs(m1.h_tilde.rl - cd(0, -1)) < 1e-15);

    // h_eff has zero diagonal and epsilon +- (i gamma rho / 2) e^{-+ 2 i phi}
    const SystemParams p = SystemParams::make(1.3, 0.7, 0.9, -0.2);
    const ModelMatrices m2 = build_model(p);
    CHECK(std::abs(m2.h_eff.ll) == 0.0);
    CHECK(std::abs(m2.h_eff.rr) == 0.0);
    const cd e2 = std::polar(1.0, 2.0 * p.phi);
    CHECK(std::abs(m2.h_eff.lr - (p.epsilon + cd(0, 0.5) * p.gamma * p.rho * std::conj(e2))) <
          1e-15);
}

TEST_CASE("model identities on random parameters") {
    std::mt19937_64 g(21);
    for (int i = 0; i < 300; ++i) {
        const auto [p, omega] = test::sample_params(g);
        const ModelMatrices m = build_model(p);
        const CMat2 bbd = m.b * adjoint(m.b);
        const CMat2 im_h = cd(0, -0.5) * (m.h_tilde - adjoint(m.h_tilde));
        CHECK((im_h + 0.5 * bbd).fnorm() < 1e-12);
        CHECK((m.h_tilde - (m.h_eff - cd(0, 0.5) * bbd)).fnorm() < 1e-12);
        CHECK(m.s.is_unitary(1e-12));

        // resolvent multiplies back to the identity
        const CMat2 r = resolvent(p, omega);
        CMat2 hm = m.h_tilde;
        hm.ll -= omega;
        hm.rr -= omega;
        CHECK((hm * r - CMat2::identity()).fnorm() < 1e-12);

        // i R^dag - i R = R^dag B B^dag R
        const CMat2 lhs = cd(0, 1) * adjoint(r) - cd(0, 1) * r;
        const CMat2 rhs = adjoint(r) * bbd * r;
        CHECK((lhs - rhs).fnorm() < 1e-10);
    }
}

TEST_CASE("complex eigenvalues of h_tilde") {
    // degenerate on the epsilon = 0 surface
    for (double rho : {0.0, 0.3, 1.0}) {
        const auto [op, om] = omega_eigenvalues(SystemParams::make(1, rho, 0.77, 0));
        CHECK(std::abs(op - cd(0, -0.5)) < 1e-15);
        CHECK(std::abs(om - cd(0, -0.5)) < 1e-15);
    }

    const auto [op, om] = omega_eigenvalues(SystemParams::make(1, 0, 0, 0.3));
    CHECK(std::abs(op - cd(0.3, -0.5)) < 1e-15);
    CHECK(std::abs(om - cd(-0.3, -0.5)) < 1e-15);

    // real-eigenvalue resonance: eigenvalue set {0, -i gamma}
    const auto [rp, rm] = omega_eigenvalues(SystemParams::make(1, 1, pi / 4, -0.5));
    CHECK(std::abs(rp) < 1e-15);
    CHECK(std::abs(rm - cd(0, -1)) < 1e-15);

    // continuity in epsilon along the principal branch; steps scale like
    // sqrt(d eps) near the exceptional point, never worse
    const SystemParams base = SystemParams::make(1, 0.7, 1.0, 0);
    const double deps = 1.0 / 200.0;
    cd prev_p, prev_m;
    bool first = true;
    for (int i = 0; i <= 200; ++i) {
        const double eps = -0.5 + static_cast<double>(i) * deps;
        const auto [a, b] = omega_eigenvalues(base.with_epsilon(eps));
        if (!first) {
            CHECK(std::abs(a - prev_p) < 2.0 * std::sqrt(deps));
            CHECK(std::abs(b - prev_m) < 2.0 * std::sqrt(deps));
        }
        prev_p = a;
        prev_m = b;
        first = false;
    }
}

TEST_CASE("resolvent pinned values and poles") {
    const CMat2 r = resolvent(SystemParams::make(1, 0, 0, 0), 0.0);
    CHECK(std::abs(r.ll - cd(0, 2)) < 1e-14);
    CHECK(std::abs(r.rr - cd(0, 2)) < 1e-14);
    CHECK(std::abs(r.lr) + std::abs(r.rl) < 1e-14);

    CHECK_THROWS_AS(resolvent(SystemParams::make(1, 1, pi / 4, -0.5), 0.0), SingularMatrix);
}

TEST_CASE("transfer matrix pinned values") {
    const CMat2 k0 = transfer_k(SystemParams::make(1, 0, 0, 0), 0.0);
    CHECK(std::abs(k0.ll) < 1e-14);
    CHECK(std::abs(k0.lr - cd(-1, 0)) < 1e-14);
    CHECK(std::abs(k0.rl - cd(-1, 0)) < 1e-14);
    CHECK(std::abs(k0.rr) < 1e-14);

    const CMat2 k1 = transfer_k(SystemParams::make(1, 1, pi / 4, 0), 0.0);
    CHECK(std::abs(k1.ll - cd(0, 1)) < 1e-14);
    CHECK(std::abs(k1.rr - cd(-1, 0)) < 1e-14);
    CHECK(std::abs(k1.lr) + std::abs(k1.rl) < 1e-14);
}

TEST_CASE("closed-form transfer matrix") {
    std::mt19937_64 g(22);
    for (int i = 0; i < 500; ++i) {
        const auto [p, omega] = test::sample_params(g);
        const CMat2 ka = transfer_k(p, omega);
        const CMat2 kb = transfer_k_closed_form(p, omega);
        CHECK((ka - kb).fnorm() < 1e-10);
        CHECK((adjoint(ka) * ka - CMat2::identity()).fnorm() < 1e-12);
        CHECK(std::abs(kb.lr - kb.rl) == 0.0);
    }

    // rho = 0 removes the constant offsets: K_rr and K_ll keep only their
    // resonant parts, which die off far from resonance
    std::mt19937_64 g2(23);
    for (int i = 0; i < 50; ++i) {
        const double w = test::uniform(g2, -3, 3);
        const double phi = test::uniform(g2, 0, 2 * pi);
        const CMat2 k = transfer_k_closed_form(SystemParams::make(1, 0, phi, 0.4), w);
        const CMat2 far = transfer_k_closed_form(SystemParams::make(1, 0, phi, 0.4), 1e6);
        CHECK(std::abs(k.rr + 0.0) < 1.0);  // no -rho offset present
        CHECK(std::abs(far.rr) < 1e-5);
        CHECK(std::abs(far.ll) < 1e-5);
        const CMat2 kz = transfer_k_closed_form(SystemParams::make(1, 0, phi, 0), w);
        CHECK(std::abs(kz.rr) < 1e-14);
        CHECK(std::abs(kz.ll) < 1e-14);
        const CMat2 k0 = kz;
        const cd expect = std::polar(1.0, phi) * cd(w, -0.5) / cd(w, 0.5);
        CHECK(std::abs(k0.lr - expect) < 1e-12);
        CHECK(std::abs(std::abs(k0.lr) - 1.0) < 1e-13);
    }

    CHECK_THROWS_AS(transfer_k_closed_form(SystemParams::make(1, 1, pi / 4, -0.5), 0.0),
                    SingularDenominator);
}

TEST_CASE("near_pole guard") {
    const SystemParams p = SystemParams::make(1, 1, pi / 4, -0.5);
    CHECK(near_pole(p, 1e-7));
    CHECK_FALSE(near_pole(p, 0.5));
    CHECK_FALSE(near_pole(SystemParams::make(1, 0, 0, 0), 0.0));
}
