#pragma once

#include <array>
#include <string>
#include <vector>

#include "slcone/complex3.hpp"
#include "slcone/strand.hpp"

namespace slc {

/// Normalized two-variable family data: unit zero-sum orthogonal coefficient
/// triples beta, gamma parametrized by an angle, conserved levels B and C,
/// and the derived scalars a, b, c and xi.
struct ConeParams {
    double theta = 0;
    double B = 0, C = 0;
    std::array<double, 3> beta{}, gamma{};
    double a = 0, b = 0, c = 0;
    Complex xi;

    StrandCoefficients beta_coeffs() const { return {beta[0], beta[1], beta[2], true}; }
    StrandCoefficients gamma_coeffs() const { return {gamma[0], gamma[1], gamma[2], true}; }
};

/// Builds ConeParams from (theta, B, C). Throws invalid_level_error if
/// |B| > 1 or |C| > 1.
ConeParams derive_params(double theta, double B, double C);

/// The two integrated strands of one cone.
struct ConeStrands {
    Trajectory y, z;
};

/// Integrates both strands from the canonical initial states over
/// [s_lo, s_hi] x [t_lo, t_hi].
ConeStrands integrate_cone_strands(const ConeParams& params, double s_lo, double s_hi,
                                   double t_lo, double t_hi, double tol = 1e-12);

/// Cone point Phi(r, s, t) = (r / sqrt(3)) (y1 z1, y2 z2, y3 z3).
ComplexTriple immersion(const ConeParams& params, const StrandState& ys, const StrandState& zs,
                        double r);
ComplexTriple immersion(const ConeParams& params, const ConeStrands& strands, double r, double s,
                        double t);

/// Value and coordinate frame of the immersion at (r, s, t).
struct TangentFrame {
    ComplexTriple phi, d_r, d_s, d_t;
};

TangentFrame tangent_frame(const ConeParams& params, const StrandState& ys,
                           const StrandState& zs, double r);
TangentFrame tangent_frame(const ConeParams& params, const ConeStrands& strands, double r,
                           double s, double t);

/// Uniform verification grid over [s0,s1] x [t0,t1] at the given radii.
struct GridSpec {
    int ns = 20, nt = 20;
    double s0 = 0, s1 = 0, t0 = 0, t1 = 0;
    std::vector<double> r_values = {0.5, 1.0, 2.0};
};

/// Maximum residuals of the special Lagrangian and conformality identities
/// over a sample grid.
struct SlReport {
    int dimension = 2;
    double omega_rs_max = 0, omega_rt_max = 0, omega_st_max = 0;
    double im_omega_max = 0;
    double radius_defect_max = 0;  // | |Phi|^2 - r^2 |
    double metric_orth_max = 0;    // pairwise |g(d_i, d_j)|
    double conformality_max = 0;   // | |d_s|^2 - |d_t|^2 | (dimension 2 only)
    double frame_norm_defect_max = 0; // | |d_s|^2 - 2 r^2 (a + b v + c w) | (dim 2)
    double tol = 0;
    bool pass = false;

    double worst() const;
};

SlReport verify_sl(const ConeParams& params, const ConeStrands& strands, const GridSpec& grid,
                   double tol);

enum class CaseLabel { u1_invariant_a, evolving_quadrics_b, reduced_c, generic };

std::string to_string(CaseLabel label);

/// Special-case classification: (a) |B| = 1 or |C| = 1; else (b) B = 0 or
/// C = 0; else (c) some component of beta or gamma vanishes (theta a multiple
/// of pi/3 modulo the pattern); else generic.
CaseLabel classify_case(const ConeParams& params, double tol = 1e-9);

/// 2x2 integer lattice in units of the strand periods (S, T).
struct Lattice2 {
    long a11 = 1, a12 = 0, a21 = 0, a22 = 1;
    long det_abs() const { return std::abs(a11 * a22 - a12 * a21); }
};

/// Torus area 2 N (a S T + b T int_0^S v + c S int_0^T w), with the two
/// period integrals done by adaptive quadrature along the strands.
/// Throws degenerate_lattice_error if det(lattice) == 0.
double area(const ConeParams& params, double S, double T, const Lattice2& lattice,
            const ConeStrands& strands);

/// Same formula with the period integrals supplied directly.
double area_formula(const ConeParams& params, double S, double T, const Lattice2& lattice,
                    double int_v, double int_w);

} // namespace slc
