#pragma once

#include <array>
#include <optional>
#include <utility>

#include "slcone/cone2.hpp"
#include "slcone/matrix3.hpp"
#include "slcone/strand.hpp"

namespace slc {

/// Coefficient data of the three-variable family: three unit triples with the
/// four orthogonality relations, plus the conserved levels of the strands.
struct TripleParams {
    std::array<double, 3> alpha{}, beta{}, gamma{};
    double A = 0, B = 0, C = 0;

    StrandCoefficients alpha_coeffs() const { return {alpha[0], alpha[1], alpha[2], false}; }
    StrandCoefficients beta_coeffs() const { return {beta[0], beta[1], beta[2], false}; }
    StrandCoefficients gamma_coeffs() const { return {gamma[0], gamma[1], gamma[2], false}; }
};

/// Residuals of the four orthogonality relations
/// (alpha.beta, alpha.gamma, beta.gamma, sum alpha_j beta_j gamma_j).
std::array<double, 4> relation_residuals(const TripleParams& params);

/// Trace-free quadric form built from a coefficient triple; the two null
/// directions inside the orthogonal plane of the triple carry the remaining
/// coefficient vectors.
struct QuadricForm {
    Mat3d matrix;
    double determinant = 0;
};

QuadricForm quadric_form(const std::array<double, 3>& alpha);

/// Solves for the orthonormal pair (beta, gamma) in alpha-perp with
/// Q(beta) = Q(gamma) = 0, canonicalized: each vector's largest-magnitude
/// component is positive and beta precedes gamma lexicographically.
/// Throws degenerate_alpha_error when components of alpha are repeated or
/// zero (threshold 1e-8 on min pairwise gap and min magnitude).
std::pair<std::array<double, 3>, std::array<double, 3>>
solve_bg_from_alpha(const std::array<double, 3>& alpha);

/// Applies the canonicalization of solve_bg_from_alpha to an existing pair
/// (sign-fix each vector, lexicographic order) so results from permuted
/// inputs can be compared directly.
std::pair<std::array<double, 3>, std::array<double, 3>>
canonical_pair(std::array<double, 3> u, std::array<double, 3> v);

TripleParams make_triple_params(const std::array<double, 3>& alpha, double A, double B, double C);

/// The three integrated strands of a three-variable solution.
struct TripleStrands {
    Trajectory x, y, z;
};

/// Integrates the three strands from canonical initial states; the radial
/// span is truncated to the maximal interval when the x strand escapes.
TripleStrands integrate_triple_strands(const TripleParams& params, double r_lo, double r_hi,
                                       double s_lo, double s_hi, double t_lo, double t_hi,
                                       double tol = 1e-12);

/// Point of the 3-fold: componentwise product of the three strands.
ComplexTriple immersion3(const TripleParams& params, const StrandState& xs,
                         const StrandState& ys, const StrandState& zs);
ComplexTriple immersion3(const TripleParams& params, const TripleStrands& strands, double r,
                         double s, double t);

TangentFrame tangent_frame3(const TripleParams& params, const StrandState& xs,
                            const StrandState& ys, const StrandState& zs);

struct GridSpec3 {
    int nr = 8, ns = 8, nt = 8;
    double r0 = 0, r1 = 0, s0 = 0, s1 = 0, t0 = 0, t1 = 0;
};

/// Same residual report as the two-variable family with dimension tag 3 and
/// no conformality claim (the frame is orthogonal but not equal-length).
SlReport verify_sl3(const TripleParams& params, const TripleStrands& strands,
                    const GridSpec3& grid, double tol);

/// Record of the vector permutation and sign flips applied by
/// normalize_signs: output slot i (alpha', beta', gamma') received input
/// vector vector_order[i] (0 = alpha, 1 = beta, 2 = gamma), multiplied by
/// vector_signs[i]. Conserved levels travel with their vectors.
struct TransformLog {
    std::array<int, 3> vector_order{0, 1, 2};
    std::array<int, 3> vector_signs{1, 1, 1};
    bool identity() const {
        return vector_order == std::array<int, 3>{0, 1, 2}
            && vector_signs == std::array<int, 3>{1, 1, 1};
    }
};

struct NormalizedTriples {
    std::array<double, 3> alpha{}, beta{}, gamma{};
    TransformLog log;
};

/// Puts the triples into the canonical sign pattern (all components of the
/// first positive, two positive and one negative in the other two) by
/// permuting the three vectors among themselves and flipping whole-vector
/// signs. Throws cannot_normalize_error if a component is zero or no group
/// element reaches the pattern.
NormalizedTriples normalize_signs(const std::array<double, 3>& alpha,
                                  const std::array<double, 3>& beta,
                                  const std::array<double, 3>& gamma);

/// Existence interval of a strand, by integration with blow-up detection;
/// finite endpoints located via the escape estimate of the integrator.
struct MaximalInterval {
    double lo = 0, hi = 0;
    bool lo_finite = false, hi_finite = false;
};

MaximalInterval maximal_interval(const StrandCoefficients& coeffs, const StrandState& initial,
                                 double horizon = 1e4, double tol = 1e-12);

} // namespace slc
