#pragma once

#include <array>
#include <vector>

#include "slcone/cone2.hpp"
#include "slcone/elliptic.hpp"
#include "slcone/matrix3.hpp"

namespace slc {

/// Closed-form potentials of the two strands. The identity checks evaluate
/// v and w through these rather than through trajectory interpolation: the
/// values are smooth to machine precision, which finite-difference stencils
/// need.
struct ConePotentials {
    EllipticForm v, w;
};

ConePotentials cone_potentials(const ConeParams& params);

/// Pointwise data of the conformal density f = a + b v(s) + c w(t) and the
/// derived fields entering the flat-connection and Killing-field formulas.
/// Second derivatives come from the potential cubics, not finite differences.
struct PointData {
    double v = 0, dv = 0, ddv = 0;
    double w = 0, dw = 0, ddw = 0;
    double f = 0;
    Complex g;
    double h = 0;
};

/// Throws singular_density_error when f <= 0.
PointData point_data(const ConeParams& params, const ConePotentials& potentials, double s,
                     double t);
PointData point_data(const ConeParams& params, double s, double t);

/// Consecutive harmonic-sequence lifts at one point, with norms
/// 1/f, 1, f respectively.
struct HarmonicTriple {
    ComplexTriple phi_m1, phi_0, phi_1;
};

HarmonicTriple harmonic_triple(const ConeParams& params, const ConeStrands& strands, double s,
                               double t);

enum class Conformality { superconformal, isotropic };

/// xi = c C + i b B and the induced classification (isotropic iff xi == 0).
std::pair<Complex, Conformality> xi_and_classify(const ConeParams& params);

struct FdGrid {
    int ns = 5, nt = 5;
    double s0 = 0.2, s1 = 1.4, t0 = 0.2, t1 = 1.4;
};

/// Max over the grid of |phi_2 - xi_ret * phi_-1| where phi_2 is assembled by
/// central finite differences of phi_1 (step h) and xi_ret is the return
/// coefficient of the family: conj(xi) in general, equal to xi whenever
/// b B = 0 (which covers every isotropic case and the reduced angles).
double return_map_residual(const ConeParams& params, const ConeStrands& strands,
                           const FdGrid& grid, double h);

/// Same quantity measured against the literal xi = c C + i b B.
double return_map_residual_vs_xi(const ConeParams& params, const ConeStrands& strands,
                                 const FdGrid& grid, double h);

/// Max over the grid of |phi_2| itself (isotropic families only).
double isotropic_residual(const ConeParams& params, const ConeStrands& strands,
                          const FdGrid& grid, double h);

/// Toda triple (chi_0, chi_1, chi_2) = (1, |xi|^{-2/3} f, |xi|^{2/3} / f).
/// Throws singular_density_error on f <= 0 and std::domain_error when the
/// parameters are isotropic (xi == 0).
std::array<double, 3> toda_solution(const ConeParams& params, double s, double t);

/// Max over grid and k of the Toda-lattice equation residual with a 5-point
/// Laplacian at step h.
double toda_residual(const ConeParams& params, const FdGrid& grid, double h);

/// Max over grid of the Tzitzeica equation residual for
/// f_T = log(f) - (2/3) log|xi| in the rescaled coordinate.
double tzitzeica_residual(const ConeParams& params, const FdGrid& grid, double h);

/// Laurent coefficients of the flat-connection one-form in the rescaled
/// holomorphic coordinate: alpha_lambda = (a1p lambda + a0p) dz +
/// (am1pp / lambda + a0pp) dzbar.
struct ConnectionCoeffs {
    Mat3c a1p, a0p, am1pp, a0pp;
};

ConnectionCoeffs connection_coeffs(const ConeParams& params, double s, double t);
ConnectionCoeffs connection_coeffs(const ConeParams& params, const ConePotentials& potentials,
                                   double s, double t);

/// Flatness residual d alpha + 1/2 [alpha ^ alpha] at the given lambda,
/// derivatives by central differences at step h.
double flatness_residual(const ConeParams& params, double s, double t, Complex lambda,
                         double h);

/// Equivariance defect of the connection under lambda -> zeta lambda,
/// max over the given sample lambdas.
double connection_equivariance_defect(const ConnectionCoeffs& conn,
                                      const std::vector<Complex>& lambdas);

/// Degree-2 polynomial Killing field: five Laurent coefficient matrices and
/// the phase branch theta of xi = r e^{i theta} used in them.
struct KillingField {
    std::array<Mat3c, 5> tau; // tau[n + 2] is the coefficient of lambda^n
    double theta_branch = 0;

    const Mat3c& coeff(int n) const { return tau[n + 2]; }
    Mat3c at_lambda(Complex lambda) const;
};

KillingField killing_field(const ConeParams& params, double s, double t);
KillingField killing_field(const ConeParams& params, const ConePotentials& potentials, double s,
                           double t);

/// Max over sample lambdas on the unit circle of |tau(lambda) + tau(lambda)^dagger|.
double killing_reality_defect(const KillingField& kf, int samples = 8);

/// Max over sample lambdas of |tau(zeta lambda) - U tau(lambda) U^{-1}| with
/// U = diag(1, zeta, zeta^2), zeta = e^{2 pi i / 3}.
double killing_equivariance_defect(const KillingField& kf, int samples = 8);

/// The order-2 Lie algebra involution A -> -P A^T P (P swaps rows/columns 2,3).
Mat3c kappa(const Mat3c& m);

/// Max over sample lambdas of |kappa(tau(lambda)) + tau(-lambda)|.
double killing_kappa_defect(const KillingField& kf, int samples = 8);

/// Max over grid, over Laurent degree n, of the residuals of the two
/// Killing-field equations with d tau_n by central finite differences.
double killing_residual(const ConeParams& params, const FdGrid& grid, double h);

/// Finite-type certificate: the degree-7 field built from the square of the
/// Killing field has top coefficients equal to the connection coefficients.
struct FiniteTypeReport {
    double defect_top = 0;    // |eta_7 - a1p|
    double defect_next = 0;   // |eta_6 - 2 a0p|
    double degree_excess = 0; // |eta_8| (structurally zero)
    int degree = 7;
};

FiniteTypeReport finite_type_certificate(const ConeParams& params, double s, double t);

/// det of the rescaled lift triple (should be identically 1).
Complex primed_lift_det(const ConeParams& params, const ConeStrands& strands, double s,
                        double t);

} // namespace slc
