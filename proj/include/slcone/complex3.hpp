#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace slc {

using Complex = std::complex<double>;

/// A point or tangent vector of C^3.
struct ComplexTriple {
    Complex z1{}, z2{}, z3{};

    constexpr Complex& operator[](int j) { return j == 0 ? z1 : (j == 1 ? z2 : z3); }
    constexpr const Complex& operator[](int j) const { return j == 0 ? z1 : (j == 1 ? z2 : z3); }

    bool finite() const {
        for (int j = 0; j < 3; ++j)
            if (!std::isfinite((*this)[j].real()) || !std::isfinite((*this)[j].imag())) return false;
        return true;
    }

    friend ComplexTriple operator+(const ComplexTriple& u, const ComplexTriple& v) {
        return {u.z1 + v.z1, u.z2 + v.z2, u.z3 + v.z3};
    }
    friend ComplexTriple operator-(const ComplexTriple& u, const ComplexTriple& v) {
        return {u.z1 - v.z1, u.z2 - v.z2, u.z3 - v.z3};
    }
    friend ComplexTriple operator*(Complex c, const ComplexTriple& u) {
        return {c * u.z1, c * u.z2, c * u.z3};
    }
    friend ComplexTriple operator*(double c, const ComplexTriple& u) {
        return {c * u.z1, c * u.z2, c * u.z3};
    }
};

/// Standard Hermitian product sum_j u_j conj(v_j).
inline Complex hermitian(const ComplexTriple& u, const ComplexTriple& v) {
    return u.z1 * std::conj(v.z1) + u.z2 * std::conj(v.z2) + u.z3 * std::conj(v.z3);
}

/// Euclidean metric of R^6: the real part of the Hermitian product.
inline double metric(const ComplexTriple& u, const ComplexTriple& v) {
    return hermitian(u, v).real();
}

/// Kaehler form: the imaginary part of the Hermitian product.
inline double kaehler_form(const ComplexTriple& u, const ComplexTriple& v) {
    return hermitian(u, v).imag();
}

inline double norm_sq(const ComplexTriple& u) { return metric(u, u); }

inline double max_abs(const ComplexTriple& u) {
    return std::max({std::abs(u.z1), std::abs(u.z2), std::abs(u.z3)});
}

/// Holomorphic volume form dz1^dz2^dz3 evaluated on (u,v,w): the 3x3
/// determinant of the column matrix, by cofactor expansion.
inline Complex holomorphic_volume(const ComplexTriple& u, const ComplexTriple& v,
                                  const ComplexTriple& w) {
    return u.z1 * (v.z2 * w.z3 - v.z3 * w.z2)
         - v.z1 * (u.z2 * w.z3 - u.z3 * w.z2)
         + w.z1 * (u.z2 * v.z3 - u.z3 * v.z2);
}

/// Pointwise special Lagrangian residuals of a frame (u,v,w). All entries are
/// absolute values; a frame spans an SL 3-plane exactly when the first four
/// vanish.
struct SlResidual {
    double omega_rs = 0;   // |omega(u,v)|
    double omega_rt = 0;   // |omega(u,w)|
    double omega_st = 0;   // |omega(v,w)|
    double im_omega = 0;   // |Im Omega(u,v,w)|
    double gram_defect = 0; // max pairwise |g(.,.)|

    double worst_lagrangian() const {
        return std::max({omega_rs, omega_rt, omega_st, im_omega});
    }
};

inline SlResidual sl_plane_residual(const ComplexTriple& u, const ComplexTriple& v,
                                    const ComplexTriple& w) {
    SlResidual r;
    r.omega_rs = std::abs(kaehler_form(u, v));
    r.omega_rt = std::abs(kaehler_form(u, w));
    r.omega_st = std::abs(kaehler_form(v, w));
    r.im_omega = std::abs(holomorphic_volume(u, v, w).imag());
    r.gram_defect = std::max({std::abs(metric(u, v)), std::abs(metric(u, w)),
                              std::abs(metric(v, w))});
    return r;
}

} // namespace slc
