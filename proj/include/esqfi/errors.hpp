#pragma once

#include <stdexcept>
#include <string>

namespace esqfi {

/// Rejected physical parameters (rho outside [0,1], non-positive gamma, ...).
struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// eig_herm2 was handed a matrix that fails the hermiticity check.
struct NotHermitian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 2x2 inversion hit a (numerically) singular matrix.  Carries |det| so
/// callers can distinguish genuine resolvent poles from roundoff.
struct SingularMatrix : std::runtime_error {
    double abs_det;
    SingularMatrix(const std::string& msg, double abs_det_)
        : std::runtime_error(msg), abs_det(abs_det_) {}
};

/// Closed-form matrix elements evaluated at (or numerically on top of) a
/// real-eigenvalue resonance where their common denominator vanishes.
struct SingularDenominator : std::runtime_error {
    double abs_den;
    SingularDenominator(const std::string& msg, double abs_den_)
        : std::runtime_error(msg), abs_den(abs_den_) {}
};

/// Linearized estimator is degenerate: the signal slope vanishes at the
/// nominal operating point.
struct ZeroSensitivity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The phase of a vanishing complex number was requested.
struct UndefinedPhase : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace esqfi
