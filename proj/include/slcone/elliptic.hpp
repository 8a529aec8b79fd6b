#pragma once

#include <array>

#include "slcone/strand.hpp"

namespace slc {

struct JacobiTriple {
    double sn, cn, dn;
};

/// Jacobi elliptic functions sn, cn, dn of argument u and parameter m (the
/// modulus squared), by the descending Landen / arithmetic-geometric-mean
/// transformation. Throws std::domain_error for m outside [0, 1].
JacobiTriple jacobi_elliptic(double u, double m);

/// Carlson symmetric integral R_F(x, y, z), x,y,z >= 0 with at most one zero.
double carlson_rf(double x, double y, double z);

/// Carlson degenerate integral R_C(x, y), x >= 0, y > 0.
double carlson_rc(double x, double y);

/// Carlson symmetric integral R_J(x, y, z, p), x,y,z >= 0 (one may vanish),
/// p > 0.
double carlson_rj(double x, double y, double z, double p);

/// Complete elliptic integral K(m) = R_F(0, 1-m, 1), parameter convention.
double complete_elliptic_k(double m);

/// Complete elliptic integral of the third kind,
/// Pi(n, m) = int_0^{K(m)} du / (1 - n sn^2(u, m)), n < 1.
double complete_elliptic_pi(double n, double m);

/// Incomplete elliptic integral of the first kind F(phi | m), |phi| <= pi/2.
double incomplete_elliptic_f(double phi, double m);

/// Closed-form solution of (v')^2 = 4 (Q(v) - B^2), v(0) = 0,
/// v'(0) = +2 sqrt(1 - B^2), as v(s) = base + span * sn^2(u0 + k s, m).
///
/// degree 3: Q - B^2 genuinely cubic; degree 2: quadratic (one zero
/// coefficient); degree 0: |B| = 1 and v is identically zero (double root).
/// `half_period`: half of the period of v (infinite for the homoclinic case
/// where the oscillation interval is bounded by a double root).
struct EllipticForm {
    int degree = 3;
    std::array<double, 3> roots{}; // ascending; only `degree` entries meaningful
    double modulus_m = 0;
    double freq_k = 0;      // argument scale: u = u0 + freq_k * s
    double phase_u0 = 0;
    double base = 0, span = 0;
    int branch_sign = +1;   // sign of v'(0+)
    double half_period = 0; // K(m) / freq_k; infinite if homoclinic
    double level_B = 0;

    bool constant() const { return degree == 0; }
    bool homoclinic() const { return !std::isfinite(half_period); }
    double period() const { return 2.0 * half_period; }

    double value(double s) const;
    double derivative(double s) const;
};

/// Builds the elliptic form for zero-sum coefficients and |B| <= 1. Roots are
/// closed-form with one Newton polish each. Throws invalid_level_error for
/// |B| > 1.
EllipticForm potential_closed_form(const StrandCoefficients& coeffs, double B);

/// Roots of a real cubic (or quadratic when a3 == 0) with all-real roots
/// expected; ascending order, Newton-polished. Returns the number of roots.
int solve_real_cubic(double a3, double a2, double a1, double a0, std::array<double, 3>& roots);

} // namespace slc
