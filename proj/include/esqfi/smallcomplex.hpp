#pragma once

#include <cmath>
#include <complex>

#include "esqfi/errors.hpp"

namespace esqfi {

using cd = std::complex<double>;

/// Amplitudes on the left/right waveguide ports.
struct CVec2 {
    cd l{0.0, 0.0};
    cd r{0.0, 0.0};

    double norm2() const { return std::norm(l) + std::norm(r); }
    double norm() const { return std::sqrt(norm2()); }
    bool finite() const {
        return std::isfinite(l.real()) && std::isfinite(l.imag()) &&
               std::isfinite(r.real()) && std::isfinite(r.imag());
    }

    CVec2& operator+=(const CVec2& o) { l += o.l; r += o.r; return *this; }
    CVec2& operator-=(const CVec2& o) { l -= o.l; r -= o.r; return *this; }
    CVec2& operator*=(cd s) { l *= s; r *= s; return *this; }
};

inline CVec2 operator+(CVec2 a, const CVec2& b) { return a += b; }
inline CVec2 operator-(CVec2 a, const CVec2& b) { return a -= b; }
inline CVec2 operator*(cd s, CVec2 v) { return v *= s; }
inline CVec2 operator*(double s, CVec2 v) { return v *= cd(s, 0.0); }

/// <a|b> with the first argument conjugated.
inline cd inner(const CVec2& a, const CVec2& b) {
    return std::conj(a.l) * b.l + std::conj(a.r) * b.r;
}

/// 2x2 complex matrix indexed by ports (l,r) x (l,r).
struct CMat2 {
    cd ll{0.0, 0.0};
    cd lr{0.0, 0.0};
    cd rl{0.0, 0.0};
    cd rr{0.0, 0.0};

    static CMat2 identity() { return {cd(1, 0), cd(0, 0), cd(0, 0), cd(1, 0)}; }
    static CMat2 zero() { return {}; }

    cd trace() const { return ll + rr; }
    cd det() const { return ll * rr - lr * rl; }
    double fnorm2() const {
        return std::norm(ll) + std::norm(lr) + std::norm(rl) + std::norm(rr);
    }
    double fnorm() const { return std::sqrt(fnorm2()); }
    bool finite() const {
        auto ok = [](cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
        return ok(ll) && ok(lr) && ok(rl) && ok(rr);
    }

    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-12) const;

    CMat2& operator+=(const CMat2& o) {
        ll += o.ll; lr += o.lr; rl += o.rl; rr += o.rr; return *this;
    }
    CMat2& operator-=(const CMat2& o) {
        ll -= o.ll; lr -= o.lr; rl -= o.rl; rr -= o.rr; return *this;
    }
    CMat2& operator*=(cd s) { ll *= s; lr *= s; rl *= s; rr *= s; return *this; }
};

inline CMat2 operator+(CMat2 a, const CMat2& b) { return a += b; }
inline CMat2 operator-(CMat2 a, const CMat2& b) { return a -= b; }
inline CMat2 operator*(cd s, CMat2 m) { return m *= s; }
inline CMat2 operator*(double s, CMat2 m) { return m *= cd(s, 0.0); }

inline CMat2 operator*(const CMat2& a, const CMat2& b) {
    return {a.ll * b.ll + a.lr * b.rl, a.ll * b.lr + a.lr * b.rr,
            a.rl * b.ll + a.rr * b.rl, a.rl * b.lr + a.rr * b.rr};
}

inline CVec2 operator*(const CMat2& m, const CVec2& v) {
    return {m.ll * v.l + m.lr * v.r, m.rl * v.l + m.rr * v.r};
}

/// Conjugate transpose.
inline CMat2 adjoint(const CMat2& a) {
    return {std::conj(a.ll), std::conj(a.rl), std::conj(a.lr), std::conj(a.rr)};
}

/// Eigendecomposition of a Hermitian 2x2 matrix, lambda_minus <= lambda_plus.
/// Eigenvectors are unit norm and carry a deterministic phase: the
/// largest-magnitude component is made real and positive.
struct HermEig2 {
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    CVec2 v_minus;
    CVec2 v_plus;
};

HermEig2 eig_herm2(const CMat2& a, double herm_tol = 1e-12);

/// Inverse of a 2x2 matrix.  Throws SingularMatrix when |det| falls below
/// singular_tol relative to the squared Frobenius norm; that is the signature
/// of a resolvent pole rather than ordinary roundoff.
CMat2 inverse2(const CMat2& a, double singular_tol = 1e-14);

}  // namespace esqfi
