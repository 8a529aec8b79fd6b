#pragma once

#include <array>
#include <vector>

#include "slcone/integrable.hpp"

namespace slc {

/// Constants of the eigenvalue curve. D and E are evaluated pointwise from
/// the Killing-field data and must be independent of the sample point.
struct SpectralConstants {
    double D = 0, E = 0;
    Complex xi;
    double spread_D = 0, spread_E = 0;
};

/// Evaluates D and E at each (s, t) sample and checks constancy. Throws
/// singular_density_error on f <= 0, constancy_violation_error if the spread
/// exceeds 1e-6.
SpectralConstants spectral_constants(const ConeParams& params,
                                     const std::vector<std::pair<double, double>>& samples);

/// Closed forms of the curve constants in terms of the family data.
/// D = a^2 + 2 (b^2 + c^2) / a. The E identity carries the sign that is
/// consistent with the characteristic polynomial: E = 2 (c^2 (1 - C^2)
/// - b^2 (1 - B^2)).
double spectral_d_closed(const ConeParams& params);
double spectral_e_closed(const ConeParams& params);

/// Pointwise D, E from the scalar fields (f, g, h).
double spectral_d_point(const PointData& pd, double r_xi);
double spectral_e_point(const PointData& pd, double r_xi);

/// Max deviation of the characteristic polynomial coefficients of tau(lambda)
/// from (1, 0, D, i E + i xi^2 lambda^6 + i conj(xi)^2 lambda^-6).
double char_poly_defect(const KillingField& kf, double D, double E, Complex xi, Complex lambda);

/// Max-entry norm of tau^3 + D tau + i (xi^2 lambda^6 + E + conj(xi)^2
/// lambda^-6) I.
double cubic_identity_residual(const KillingField& kf, double D, double E, Complex xi,
                               Complex lambda);

/// One lambda-sample of the spectral curve: the three mu roots of
/// mu^3 + D mu + i E + i xi^2 lambda^p + i conj(xi)^2 lambda^-p = 0
/// (p = 2 for the quotient curve, p = 6 for the unquotiented one).
struct CurveSample {
    Complex lambda;
    std::array<Complex, 3> mu;
    double back_substitution_residual = 0;
};

/// Roots of a cubic with complex coefficients x^3 + a2 x^2 + a1 x + a0 by
/// Cardano with one Newton polish per root.
std::array<Complex, 3> solve_cubic_complex(Complex a2, Complex a1, Complex a0);

CurveSample curve_sample(double D, double E, Complex xi, Complex lambda, int lambda_power);

std::vector<CurveSample> curve_samples(double D, double E, Complex xi,
                                       const std::vector<Complex>& lambda_grid,
                                       int lambda_power = 2);

/// Distance between two mu root multisets under the best of the six pairings.
double multiset_distance(const std::array<Complex, 3>& u, const std::array<Complex, 3>& v);

struct InvolutionResiduals {
    double rho = 0;   // lambda -> -lambda leaves the mu multiset fixed
    double sigma = 0; // (lambda, mu) -> (1/conj(lambda), -conj(mu))
};

/// Involution closure over a lambda grid (each lambda paired with -lambda and
/// 1/conj(lambda) samples computed on the fly).
InvolutionResiduals involution_residuals(double D, double E, Complex xi,
                                         const std::vector<Complex>& lambda_grid,
                                         int lambda_power = 2);

/// Default lambda grid: n samples on the unit circle plus a few radial rays.
std::vector<Complex> default_lambda_grid(int n_circle = 512, int n_rays = 4,
                                         int per_ray = 8);

} // namespace slc
