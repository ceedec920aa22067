#pragma once

#include <utility>

#include "esqfi/smallcomplex.hpp"

namespace esqfi {

/// Physical parameters of the retro-reflected two-mode ring resonator.
/// gamma is the cavity coupling rate and sets the time scale (default 1);
/// rho/tau are the mirror reflection/transmission amplitudes with
/// rho^2 + tau^2 = 1; phi is the one-way propagation phase to the mirror;
/// epsilon is the cross-coupling to be estimated.
struct SystemParams {
    double gamma = 1.0;
    double rho = 0.0;
    double tau = 1.0;  // derived: +sqrt(1 - rho^2)
    double phi = 0.0;  // canonicalized to [0, 2*pi)
    double epsilon = 0.0;

    /// Validates and canonicalizes.  Throws InvalidParams.
    static SystemParams make(double gamma, double rho, double phi, double epsilon);

    SystemParams with_epsilon(double eps) const {
        SystemParams q = *this;
        q.epsilon = eps;
        return q;
    }
};

/// The static matrices of the model: mirror scattering matrix s, input
/// coupling matrix b, non-Hermitian Hamiltonian h_tilde and its Hermitian
/// part h_eff.  build_model checks the defining identities
///   Im(h_tilde) = -(1/2) b b^dag          (unitarity condition)
///   h_tilde     = h_eff - (i/2) b b^dag
/// on construction.
struct ModelMatrices {
    CMat2 s;
    CMat2 b;
    CMat2 h_tilde;
    CMat2 h_eff;
};

ModelMatrices build_model(const SystemParams& p);

/// Complex eigenvalues (Omega_plus, Omega_minus) of h_tilde on the principal
/// square-root branch.  Both equal -i*gamma/2 at epsilon = 0.
std::pair<cd, cd> omega_eigenvalues(const SystemParams& p);

/// det(h_tilde - omega I), the common denominator of every closed-form
/// matrix element.  Zero exactly at real-eigenvalue resonances.
cd resolvent_denominator(const SystemParams& p, double omega);

/// True when |det(h_tilde - omega I)|^2 < 1e-12 * gamma^4, i.e. close enough
/// to a resonance that downstream values should be flagged.
bool near_pole(const SystemParams& p, double omega);

/// R(omega) = (h_tilde - omega I)^-1.  Throws SingularMatrix at poles.
CMat2 resolvent(const SystemParams& p, double omega);

/// Transfer matrix K(omega) = s (I + i b^dag R(omega) b); unitary wherever
/// the resolvent exists.
CMat2 transfer_k(const SystemParams& p, double omega);

/// K(omega) assembled entry-by-entry from the closed-form expressions with
/// denominator (omega - Omega_plus)(omega - Omega_minus).  Off-diagonals are
/// equal by construction.  Agrees with transfer_k to better than 1e-10.
CMat2 transfer_k_closed_form(const SystemParams& p, double omega);

}  // namespace esqfi
