#pragma once

#include <utility>

#include "esqfi/resonator.hpp"
#include "esqfi/smallcomplex.hpp"

namespace esqfi {

/// Spectrum of the Hermitian response generator A at one frequency, with
/// lambda_minus <= 0 <= lambda_plus whenever tau > 0 (det A <= 0 always).
/// near_singular marks values taken close to a resolvent pole, where the
/// spectrum grows without bound and should be treated with care.
struct GwsmSpectrum {
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    CVec2 v_minus;
    CVec2 v_plus;
    bool near_singular = false;
};

/// The generator A(omega) = -i K^dag dK/depsilon built from its closed-form
/// matrix elements.  Hermitian; equal to -B^dag R^dag V R B with the
/// symmetric coupling perturbation V = [[0,1],[1,0]].
CMat2 gwsm_a(const SystemParams& p, double omega);

/// A(omega) evaluated through the definition -B^dag R^dag V R B.
/// Reference route for cross-checking gwsm_a.
CMat2 gwsm_a_definition(const SystemParams& p, double omega);

/// Central finite difference of the transfer matrix:
///   -i K^dag (K(eps+h) - K(eps-h)) / (2h), Hermitized.
/// h <= 0 selects the default step 1e-5 * gamma.  O(h^2) accurate.
CMat2 gwsm_from_k_derivative(const SystemParams& p, double omega, double h = 0.0);

/// (trace, det) of A(omega) from their own closed forms; det <= 0.
std::pair<double, double> gwsm_trace_det(const SystemParams& p, double omega);

/// Eigendecomposition of gwsm_a with the near-pole flag set.
GwsmSpectrum gwsm_spectrum(const SystemParams& p, double omega);

/// (lambda_minus, lambda_plus) at epsilon = 0 from the closed form
///   -(gamma/|zeta|^2) (rho c +- sqrt(tau^2 + rho^2 c^2)),
/// c = Re(e^{2 i phi} zeta^* / zeta), zeta = omega + i gamma / 2.
/// Requires p.epsilon == 0; there is no pole on the epsilon = 0 surface.
std::pair<double, double> lambda0_closed_form(const SystemParams& p, double omega);

}  // namespace esqfi
