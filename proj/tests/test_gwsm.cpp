#include <numbers>
#include <random>

#include <doctest.h>

#include "esqfi/gwsm.hpp"
#include "test_support.hpp"

using namespace esqfi;

namespace {
constexpr double pi = std::numbers::pi;
const double sqrt27 = std::sqrt(27.0);
const double wstar = 1.0 / std::sqrt(12.0);
}  // namespace

TEST_CASE("full reflection leaves only the ll element") {
    std::mt19937_64 g(31);
    for (int i = 0; i < 100; ++i) {
        const SystemParams p =
            SystemParams::make(1, 1, test::uniform(g, 0, 2 * pi), test::uniform(g, -0.3, 0.3));
        const double w = test::uniform(g, -3, 3);
        if (std::abs(resolvent_denominator(p, w)) < 0.1) continue;
        const CMat2 a = gwsm_a(p, w);
        CHECK(std::abs(a.lr) < 1e-14);
        CHECK(std::abs(a.rl) < 1e-14);
        CHECK(std::abs(a.rr) < 1e-14);
    }
}

TEST_CASE("A_ll is 8/gamma on the epsilon = -omega diagonal at phi = 0") {
    for (int i = 0; i < 20; ++i) {
        const double w = -1.5 + 3.0 * i / 19.0;
        const SystemParams p = SystemParams::make(1, 1, 0, -w);
        CHECK(gwsm_a(p, w).ll.real() == doctest::Approx(8.0).epsilon(1e-12));
    }
}

TEST_CASE("closed form matches the definition route") {
    std::mt19937_64 g(32);
    for (int i = 0; i < 400; ++i) {
        const auto [p, w] = test::sample_params(g);
        const CMat2 a = gwsm_a(p, w);
        const CMat2 b = gwsm_a_definition(p, w);
        CHECK((a - b).fnorm() < 1e-10 * std::max(1.0, a.fnorm()));
        CHECK(a.is_hermitian(1e-12));
    }
}

TEST_CASE("finite-difference route") {
    // degenerate-point landmark: eigenvalues +-4/gamma
    const CMat2 fd = gwsm_from_k_derivative(SystemParams::make(1, 0, 0, 0), 0.0, 1e-5);
    const HermEig2 e = eig_herm2(fd);
    CHECK(e.lambda_minus == doctest::Approx(-4).epsilon(1e-8));
    CHECK(e.lambda_plus == doctest::Approx(4).epsilon(1e-8));
    CHECK(std::abs(fd.ll) < 1e-8);
    CHECK(std::abs(fd.rr) < 1e-8);

    // antisymmetric-phase landmark: |A_ll| = sqrt(27)/gamma at omega = +-gamma/sqrt(12);
    // the closed forms put the positive lobe at the negative frequency.
    const SystemParams pn = SystemParams::make(1, 1, pi / 4, 0);
    CHECK(gwsm_from_k_derivative(pn, wstar, 1e-5).ll.real() ==
          doctest::Approx(-sqrt27).epsilon(1e-8));
    CHECK(gwsm_from_k_derivative(pn, -wstar, 1e-5).ll.real() ==
          doctest::Approx(sqrt27).epsilon(1e-8));

    // second-order convergence: halving h divides the error by about 4
    std::mt19937_64 g(33);
    for (int i = 0; i < 20; ++i) {
        const auto [p, w] = test::sample_params(g, 0.5);
        const CMat2 exact = gwsm_a(p, w);
        const double e1 = (gwsm_from_k_derivative(p, w, 2e-3) - exact).fnorm();
        const double e2 = (gwsm_from_k_derivative(p, w, 1e-3) - exact).fnorm();
        if (e2 < 1e-12) continue;  // error already at roundoff
        CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.5));
    }
}

TEST_CASE("trace and determinant closed forms") {
    std::mt19937_64 g(34);
    for (int i = 0; i < 200; ++i) {
        const auto [p, w] = test::sample_params(g);
        const auto [tr, det] = gwsm_trace_det(p, w);
        CHECK(det <= 0.0);
        const CMat2 a = gwsm_a(p, w);
        CHECK(tr == doctest::Approx(a.ll.real() + a.rr.real()).epsilon(1e-10));
        const double det_entries = a.ll.real() * a.rr.real() - std::norm(a.lr);
        CHECK(det == doctest::Approx(det_entries).epsilon(1e-10).scale(1.0));
    }

    // tau = 0 kills the determinant
    const auto [tr1, det1] = gwsm_trace_det(SystemParams::make(1, 1, 0.3, 0.2), 0.7);
    (void)tr1;
    CHECK(det1 == 0.0);

    // degenerate point at resonance: trace 0, det -16
    const auto [tr0, det0] = gwsm_trace_det(SystemParams::make(1, 0, 0, 0), 0.0);
    CHECK(tr0 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(det0 == doctest::Approx(-16.0).epsilon(1e-12));
}

TEST_CASE("spectrum") {
    // rho = 0, eps = 0: lambda_+- = +-gamma/(gamma^2/4 + omega^2)
    for (double w : {0.0, 0.4, -1.3, 2.5}) {
        const GwsmSpectrum s = gwsm_spectrum(SystemParams::make(1, 0, 0, 0), w);
        const double expect = 1.0 / (0.25 + w * w);
        CHECK(s.lambda_plus == doctest::Approx(expect).epsilon(1e-12));
        CHECK(s.lambda_minus == doctest::Approx(-expect).epsilon(1e-12));
    }

    // rho = 1: spectrum is {A_ll, 0}
    std::mt19937_64 g(35);
    for (int i = 0; i < 50; ++i) {
        const SystemParams p =
            SystemParams::make(1, 1, test::uniform(g, 0, 2 * pi), test::uniform(g, -0.3, 0.3));
        const double w = test::uniform(g, -3, 3);
        if (std::abs(resolvent_denominator(p, w)) < 0.1) continue;
        const GwsmSpectrum s = gwsm_spectrum(p, w);
        const double all = gwsm_a(p, w).ll.real();
        if (all >= 0) {
            CHECK(s.lambda_plus == doctest::Approx(all).epsilon(1e-12));
            CHECK(std::abs(s.lambda_minus) < 1e-12 * std::max(1.0, std::abs(all)));
        } else {
            CHECK(s.lambda_minus == doctest::Approx(all).epsilon(1e-12));
            CHECK(std::abs(s.lambda_plus) < 1e-12 * std::max(1.0, std::abs(all)));
        }
    }

    // antisymmetric phase: the nonzero branch is odd in omega, so the
    // spectrum mirrors as lambda_plus(omega) = -lambda_minus(-omega)
    const SystemParams pn = SystemParams::make(1, 1, pi / 4, 0);
    for (double w : {0.1, 0.3, wstar, 1.0, 2.2}) {
        const GwsmSpectrum sp = gwsm_spectrum(pn, w);
        const GwsmSpectrum sm = gwsm_spectrum(pn, -w);
        CHECK(sp.lambda_plus == doctest::Approx(-sm.lambda_minus).epsilon(1e-12));
        const double all = gwsm_a(pn, w).ll.real();
        CHECK(all == doctest::Approx(-2.0 * w / std::pow(0.25 + w * w, 2)).epsilon(1e-12));
    }

    // consistency with the trace/det quadratic
    std::mt19937_64 g2(36);
    for (int i = 0; i < 100; ++i) {
        const auto [p, w] = test::sample_params(g2);
        const GwsmSpectrum s = gwsm_spectrum(p, w);
        const auto [tr, det] = gwsm_trace_det(p, w);
        const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
        CHECK(s.lambda_plus == doctest::Approx(0.5 * (tr + disc)).epsilon(1e-10));
        CHECK(s.lambda_minus == doctest::Approx(0.5 * (tr - disc)).epsilon(1e-10));
    }

    // decay at large frequency
    const GwsmSpectrum far = gwsm_spectrum(SystemParams::make(1, 0.8, 0.5, 0), 1e3);
    CHECK(std::abs(far.lambda_plus) < 1e-5 * 4.0);
    CHECK(std::abs(far.lambda_minus) < 1e-5 * 4.0);

    // flagged near the resonance, with values still returned
    const GwsmSpectrum near = gwsm_spectrum(SystemParams::make(1, 1, pi / 4, -0.5), 1e-7);
    CHECK(near.near_singular);
    CHECK(std::isfinite(near.lambda_plus));
}

TEST_CASE("epsilon = 0 closed form") {
    CHECK_THROWS_AS(lambda0_closed_form(SystemParams::make(1, 0.5, 0, 0.1), 0.0), InvalidParams);

    // lambda_plus = 4 (1 + rho) / gamma at omega = 0, phi = 0
    for (double rho : {0.0, 0.5, 1.0}) {
        const auto [lm, lp] = lambda0_closed_form(SystemParams::make(1, rho, 0, 0), 0.0);
        (void)lm;
        CHECK(lp == doctest::Approx(4.0 * (1.0 + rho)).epsilon(1e-12));
    }
    // mirrored at phi = pi/2
    for (double rho : {0.0, 0.5, 1.0}) {
        const auto [lm, lp] = lambda0_closed_form(SystemParams::make(1, rho, pi / 2, 0), 0.0);
        (void)lp;
        CHECK(lm == doctest::Approx(-4.0 * (1.0 + rho)).epsilon(1e-12));
    }

    // antisymmetric-phase extrema: +sqrt(27) at -gamma/sqrt(12) and mirrored
    const SystemParams pn = SystemParams::make(1, 1, pi / 4, 0);
    const auto [lm_at_pos, lp_at_pos] = lambda0_closed_form(pn, wstar);
    CHECK(lm_at_pos == doctest::Approx(-sqrt27).epsilon(1e-12));
    CHECK(std::abs(lp_at_pos) < 1e-12);
    const auto [lm_at_neg, lp_at_neg] = lambda0_closed_form(pn, -wstar);
    CHECK(lp_at_neg == doctest::Approx(sqrt27).epsilon(1e-12));
    CHECK(std::abs(lm_at_neg) < 1e-12);

    // matches the eigendecomposition and obeys the 4 (1 + rho) / gamma bound
    std::mt19937_64 g(37);
    for (int i = 0; i < 300; ++i) {
        const SystemParams p =
            SystemParams::make(1, test::uniform(g, 0, 1), test::uniform(g, 0, 2 * pi), 0);
        const double w = test::uniform(g, -5, 5);
        const auto [lm, lp] = lambda0_closed_form(p, w);
        const GwsmSpectrum s = gwsm_spectrum(p, w);
        CHECK(lm == doctest::Approx(s.lambda_minus).epsilon(1e-10));
        CHECK(lp == doctest::Approx(s.lambda_plus).epsilon(1e-10));
        const double bound = 4.0 * (1.0 + p.rho) + 1e-9;
        CHECK(std::abs(lm) <= bound);
        CHECK(std::abs(lp) <= bound);
    }
}

TEST_CASE("oracle triangle on random points") {
    std::mt19937_64 g(38);
    for (int i = 0; i < 300; ++i) {
        const auto [p, w] = test::sample_params(g);
        const CMat2 closed = gwsm_a(p, w);
        const CMat2 defn = gwsm_a_definition(p, w);
        const CMat2 fd = gwsm_from_k_derivative(p, w);
        const double scale = std::max(1.0, closed.fnorm());
        CHECK((closed - defn).fnorm() < 1e-8 * scale);
        CHECK((closed - fd).fnorm() < 1e-8 * scale);
        CHECK((defn - fd).fnorm() < 1e-8 * scale);
    }
}
