#include "slcone/cone3.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "slcone/util.hpp"

namespace slc {
namespace {

double dot(const std::array<double, 3>& u, const std::array<double, 3>& v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

std::array<double, 3> normalized(std::array<double, 3> u) {
    const double n = std::sqrt(dot(u, u));
    if (n == 0) throw std::invalid_argument("normalized: zero vector");
    for (auto& x : u) x /= n;
    return u;
}

// Sign-fix: make the largest-magnitude component positive.
std::array<double, 3> sign_fixed(std::array<double, 3> u) {
    int arg = 0;
    for (int j = 1; j < 3; ++j)
        if (std::abs(u[j]) > std::abs(u[arg])) arg = j;
    if (u[arg] < 0)
        for (auto& x : u) x = -x;
    return u;
}

bool lex_less(const std::array<double, 3>& u, const std::array<double, 3>& v) {
    for (int j = 0; j < 3; ++j) {
        if (u[j] < v[j]) return true;
        if (u[j] > v[j]) return false;
    }
    return false;
}

} // namespace

std::array<double, 4> relation_residuals(const TripleParams& p) {
    double abg = 0;
    for (int j = 0; j < 3; ++j) abg += p.alpha[j] * p.beta[j] * p.gamma[j];
    return {std::abs(dot(p.alpha, p.beta)), std::abs(dot(p.alpha, p.gamma)),
            std::abs(dot(p.beta, p.gamma)), std::abs(abg)};
}

QuadricForm quadric_form(const std::array<double, 3>& alpha) {
    const double a1 = alpha[0], a2 = alpha[1], a3 = alpha[2];
    QuadricForm q;
    q.matrix(0, 1) = q.matrix(1, 0) = a3 * (a2 - a1);
    q.matrix(0, 2) = q.matrix(2, 0) = a2 * (a1 - a3);
    q.matrix(1, 2) = q.matrix(2, 1) = a1 * (a3 - a2);
    q.determinant = 2.0 * a1 * a2 * a3 * (a1 - a3) * (a2 - a1) * (a3 - a2);
    return q;
}

std::pair<std::array<double, 3>, std::array<double, 3>>
canonical_pair(std::array<double, 3> u, std::array<double, 3> v) {
    u = sign_fixed(u);
    v = sign_fixed(v);
    if (!lex_less(u, v)) std::swap(u, v);
    return {u, v};
}

std::pair<std::array<double, 3>, std::array<double, 3>>
solve_bg_from_alpha(const std::array<double, 3>& alpha_in) {
    const std::array<double, 3> alpha = normalized(alpha_in);
    const double gap = std::min({std::abs(alpha[0] - alpha[1]), std::abs(alpha[1] - alpha[2]),
                                 std::abs(alpha[0] - alpha[2])});
    const double mag = std::min({std::abs(alpha[0]), std::abs(alpha[1]), std::abs(alpha[2])});
    if (gap < 1e-8 || mag < 1e-8)
        throw degenerate_alpha_error(
            "solve_bg_from_alpha: components must be distinct and nonzero");

    // Orthonormal basis of alpha-perp: Gram-Schmidt from the coordinate axis
    // least aligned with alpha, completed by the cross product.
    int least = 0;
    for (int j = 1; j < 3; ++j)
        if (std::abs(alpha[j]) < std::abs(alpha[least])) least = j;
    std::array<double, 3> e1{};
    e1[least] = 1.0;
    const double proj = dot(e1, alpha);
    for (int j = 0; j < 3; ++j) e1[j] -= proj * alpha[j];
    e1 = normalized(e1);
    const std::array<double, 3> e2 = {alpha[1] * e1[2] - alpha[2] * e1[1],
                                      alpha[2] * e1[0] - alpha[0] * e1[2],
                                      alpha[0] * e1[1] - alpha[1] * e1[0]};

    // Restrict the quadric to the plane: 2x2 symmetric trace-free form, with
    // null directions the diagonals of the eigenbasis.
    const QuadricForm qf = quadric_form(alpha);
    const auto apply = [&](const std::array<double, 3>& u, const std::array<double, 3>& v) {
        double s = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += u[i] * qf.matrix(i, j) * v[j];
        return s;
    };
    const double s11 = apply(e1, e1), s12 = apply(e1, e2), s22 = apply(e2, e2);
    // Closed-form eigenvectors of [[s11, s12], [s12, s22]] (trace-free up to
    // roundoff): angle of the +q eigenvector.
    const double half_diff = 0.5 * (s11 - s22);
    const double phi = 0.5 * std::atan2(s12, half_diff);
    const std::array<double, 2> up = {std::cos(phi), std::sin(phi)};
    const std::array<double, 2> um = {-std::sin(phi), std::cos(phi)};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::array<double, 3> bvec{}, gvec{};
    for (int j = 0; j < 3; ++j) {
        bvec[j] = inv_sqrt2 * ((up[0] + um[0]) * e1[j] + (up[1] + um[1]) * e2[j]);
        gvec[j] = inv_sqrt2 * ((up[0] - um[0]) * e1[j] + (up[1] - um[1]) * e2[j]);
    }
    return canonical_pair(bvec, gvec);
}

TripleParams make_triple_params(const std::array<double, 3>& alpha, double A, double B,
                                double C) {
    if (!(std::abs(A) <= 1 && std::abs(B) <= 1 && std::abs(C) <= 1))
        throw invalid_level_error("make_triple_params: levels must lie in [-1, 1]");
    TripleParams p;
    p.alpha = normalized(alpha);
    auto [bv, gv] = solve_bg_from_alpha(p.alpha);
    p.beta = bv;
    p.gamma = gv;
    p.A = A;
    p.B = B;
    p.C = C;
    return p;
}

TripleStrands integrate_triple_strands(const TripleParams& params, double r_lo, double r_hi,
                                       double s_lo, double s_hi, double t_lo, double t_hi,
                                       double tol) {
    // None of the coefficient triples is zero-sum here, so any strand can
    // escape in finite parameter; trajectories truncate to their maximal
    // intervals instead of throwing.
    IntegrateOptions opts;
    opts.throw_on_escape = false;
    TripleStrands out{
        integrate_strand(params.alpha_coeffs(), initial_state(params.alpha_coeffs(), params.A),
                         r_lo, r_hi, tol, opts),
        integrate_strand(params.beta_coeffs(), initial_state(params.beta_coeffs(), params.B),
                         s_lo, s_hi, tol, opts),
        integrate_strand(params.gamma_coeffs(), initial_state(params.gamma_coeffs(), params.C),
                         t_lo, t_hi, tol, opts)};
    return out;
}

ComplexTriple immersion3(const TripleParams& /*params*/, const StrandState& xs,
                         const StrandState& ys, const StrandState& zs) {
    return {xs.y.z1 * ys.y.z1 * zs.y.z1, xs.y.z2 * ys.y.z2 * zs.y.z2,
            xs.y.z3 * ys.y.z3 * zs.y.z3};
}

ComplexTriple immersion3(const TripleParams& params, const TripleStrands& strands, double r,
                         double s, double t) {
    return immersion3(params, strands.x.at(r), strands.y.at(s), strands.z.at(t));
}

TangentFrame tangent_frame3(const TripleParams& params, const StrandState& xs,
                            const StrandState& ys, const StrandState& zs) {
    TangentFrame fr;
    const auto& x = xs.y;
    const auto& y = ys.y;
    const auto& z = zs.y;
    fr.phi = immersion3(params, xs, ys, zs);
    fr.d_r = {params.alpha[0] * std::conj(x.z2 * x.z3) * y.z1 * z.z1,
              params.alpha[1] * std::conj(x.z3 * x.z1) * y.z2 * z.z2,
              params.alpha[2] * std::conj(x.z1 * x.z2) * y.z3 * z.z3};
    fr.d_s = {params.beta[0] * x.z1 * std::conj(y.z2 * y.z3) * z.z1,
              params.beta[1] * x.z2 * std::conj(y.z3 * y.z1) * z.z2,
              params.beta[2] * x.z3 * std::conj(y.z1 * y.z2) * z.z3};
    fr.d_t = {params.gamma[0] * x.z1 * y.z1 * std::conj(z.z2 * z.z3),
              params.gamma[1] * x.z2 * y.z2 * std::conj(z.z3 * z.z1),
              params.gamma[2] * x.z3 * y.z3 * std::conj(z.z1 * z.z2)};
    return fr;
}

SlReport verify_sl3(const TripleParams& params, const TripleStrands& strands,
                    const GridSpec3& grid, double tol) {
    SlReport rep;
    rep.dimension = 3;
    rep.tol = tol;
    if (grid.nr < 2 || grid.ns < 2 || grid.nt < 2)
        throw std::invalid_argument("verify_sl3: grid sizes must be at least 2");

    const std::size_t total = std::size_t(grid.nr) * std::size_t(grid.ns) * std::size_t(grid.nt);
    std::mutex merge_mutex;

    parallel_for(total, [&](std::size_t idx) {
        const int i = int(idx / (std::size_t(grid.ns) * grid.nt));
        const int j = int((idx / std::size_t(grid.nt)) % std::size_t(grid.ns));
        const int k = int(idx % std::size_t(grid.nt));
        const double r = grid.r0 + (grid.r1 - grid.r0) * double(i) / double(grid.nr - 1);
        const double s = grid.s0 + (grid.s1 - grid.s0) * double(j) / double(grid.ns - 1);
        const double t = grid.t0 + (grid.t1 - grid.t0) * double(k) / double(grid.nt - 1);
        const TangentFrame fr =
            tangent_frame3(params, strands.x.at(r), strands.y.at(s), strands.z.at(t));
        const SlResidual res = sl_plane_residual(fr.d_r, fr.d_s, fr.d_t);
        std::lock_guard<std::mutex> lock(merge_mutex);
        rep.omega_rs_max = std::max(rep.omega_rs_max, res.omega_rs);
        rep.omega_rt_max = std::max(rep.omega_rt_max, res.omega_rt);
        rep.omega_st_max = std::max(rep.omega_st_max, res.omega_st);
        rep.im_omega_max = std::max(rep.im_omega_max, res.im_omega);
        rep.metric_orth_max = std::max(rep.metric_orth_max, res.gram_defect);
    });
    rep.pass = rep.worst() < tol;
    return rep;
}

NormalizedTriples normalize_signs(const std::array<double, 3>& alpha,
                                  const std::array<double, 3>& beta,
                                  const std::array<double, 3>& gamma) {
    for (int j = 0; j < 3; ++j)
        if (alpha[j] == 0 || beta[j] == 0 || gamma[j] == 0)
            throw cannot_normalize_error("normalize_signs: zero component");

    const std::array<const std::array<double, 3>*, 3> in = {&alpha, &beta, &gamma};
    static constexpr std::array<std::array<int, 3>, 6> kPerms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    const auto positives = [](const std::array<double, 3>& u) {
        int n = 0;
        for (double x : u) n += (x > 0);
        return n;
    };

    for (const auto& order : kPerms) {
        for (int mask = 0; mask < 8; ++mask) {
            const std::array<int, 3> sg = {(mask & 1) ? -1 : 1, (mask & 2) ? -1 : 1,
                                           (mask & 4) ? -1 : 1};
            NormalizedTriples out;
            for (int j = 0; j < 3; ++j) {
                out.alpha[j] = sg[0] * (*in[order[0]])[j];
                out.beta[j] = sg[1] * (*in[order[1]])[j];
                out.gamma[j] = sg[2] * (*in[order[2]])[j];
            }
            if (positives(out.alpha) == 3 && positives(out.beta) == 2
                && positives(out.gamma) == 2) {
                out.log.vector_order = order;
                out.log.vector_signs = sg;
                return out;
            }
        }
    }
    throw cannot_normalize_error("normalize_signs: canonical sign pattern unreachable");
}

MaximalInterval maximal_interval(const StrandCoefficients& coeffs, const StrandState& initial,
                                 double horizon, double tol) {
    MaximalInterval iv;
    IntegrateOptions opts;
    opts.throw_on_escape = true;
    try {
        Trajectory fwd = integrate_strand(coeffs, initial, initial.s, initial.s + horizon, tol,
                                          opts);
        iv.hi = fwd.hi();
        iv.hi_finite = false;
    } catch (const finite_escape_error& e) {
        iv.hi = e.escape_param;
        iv.hi_finite = true;
    }
    try {
        Trajectory bwd = integrate_strand(coeffs, initial, initial.s - horizon, initial.s, tol,
                                          opts);
        iv.lo = bwd.lo();
        iv.lo_finite = false;
    } catch (const finite_escape_error& e) {
        iv.lo = e.escape_param;
        iv.lo_finite = true;
    }
    return iv;
}

} // namespace slc
