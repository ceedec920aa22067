#include "esqfi/smallcomplex.hpp"

#include <algorithm>

namespace esqfi {

bool CMat2::is_hermitian(double tol) const {
    const CMat2 d = *this - adjoint(*this);
    return d.fnorm() <= tol * std::max(1.0, fnorm());
}

bool CMat2::is_unitary(double tol) const {
    const CMat2 d = adjoint(*this) * (*this) - CMat2::identity();
    return d.fnorm() <= tol * std::max(1.0, fnorm());
}

namespace {

// Rotate the global phase so the largest-magnitude component is real positive.
CVec2 canonical_phase(CVec2 v) {
    const cd pivot = std::abs(v.l) >= std::abs(v.r) ? v.l : v.r;
    const double m = std::abs(pivot);
    if (m > 0.0) {
        const cd ph = std::conj(pivot) / m;
        v.l *= ph;
        v.r *= ph;
    }
    return v;
}

}  // namespace

HermEig2 eig_herm2(const CMat2& m, double herm_tol) {
    if (!m.finite()) throw NotHermitian("eig_herm2: non-finite entries");
    if (!m.is_hermitian(herm_tol)) throw NotHermitian("eig_herm2: matrix is not Hermitian");

    // Work with the exactly Hermitian part; the off-Hermitian residue is
    // below herm_tol by the check above.
    const double a = m.ll.real();
    const double d = m.rr.real();
    const cd b = 0.5 * (m.lr + std::conj(m.rl));

    const double tr = a + d;
    const double disc = std::hypot(a - d, 2.0 * std::abs(b));
    const double lam_minus = 0.5 * (tr - disc);
    const double lam_plus = 0.5 * (tr + disc);

    const double scale = std::max({std::abs(a), std::abs(d), std::abs(b), 1e-300});
    if (disc < 1e-12 * scale) {
        // Degenerate pair: any orthonormal basis works, return the canonical one.
        return {lam_minus, lam_plus, CVec2{cd(1, 0), cd(0, 0)}, CVec2{cd(0, 0), cd(1, 0)}};
    }

    // Two algebraic candidates for the lambda_plus eigenvector; keep the
    // better conditioned one, then take the orthogonal complement.
    const CVec2 u1{b, cd(lam_plus - a, 0.0)};
    const CVec2 u2{cd(lam_plus - d, 0.0), std::conj(b)};
    CVec2 vp = u1.norm2() >= u2.norm2() ? u1 : u2;
    vp *= cd(1.0 / vp.norm(), 0.0);
    CVec2 vm{-std::conj(vp.r), std::conj(vp.l)};

    return {lam_minus, lam_plus, canonical_phase(vm), canonical_phase(vp)};
}

CMat2 inverse2(const CMat2& a, double singular_tol) {
    const cd det = a.det();
    const double scale2 = std::max(a.fnorm2(), 1e-300);
    if (!(std::abs(det) > singular_tol * scale2)) {
        throw SingularMatrix("inverse2: singular matrix", std::abs(det));
    }
    const cd inv = cd(1.0, 0.0) / det;
    return {inv * a.rr, -inv * a.lr, -inv * a.rl, inv * a.ll};
}

}  // namespace esqfi
