#include "slcone/cone2.hpp"

#include <cmath>
#include <mutex>

#include "slcone/quadrature.hpp"
#include "slcone/util.hpp"

namespace slc {
namespace {

constexpr double kInvSqrt3 = 0.57735026918962576451;

} // namespace

ConeParams derive_params(double theta, double B, double C) {
    if (!(std::abs(B) <= 1.0 && std::abs(C) <= 1.0))
        throw invalid_level_error("derive_params: levels must satisfy |B| <= 1, |C| <= 1");
    ConeParams p;
    p.theta = theta;
    p.B = B;
    p.C = C;
    const double ct = std::cos(theta), st = std::sin(theta);
    const double r2 = 1.0 / std::sqrt(2.0), r6 = 1.0 / std::sqrt(6.0);
    p.beta = {ct * r2 - st * r6, -ct * r2 - st * r6, 2.0 * st * r6};
    p.gamma = {-ct * r6 - st * r2, -ct * r6 + st * r2, 2.0 * ct * r6};
    p.a = (p.beta[0] * p.beta[0] + p.beta[1] * p.beta[1] + p.beta[2] * p.beta[2]) / 6.0;
    p.b = -0.5 * p.beta[0] * p.beta[1] * p.beta[2];
    p.c = -0.5 * p.gamma[0] * p.gamma[1] * p.gamma[2];
    p.xi = Complex(p.c * C, p.b * B);
    return p;
}

ConeStrands integrate_cone_strands(const ConeParams& params, double s_lo, double s_hi,
                                   double t_lo, double t_hi, double tol) {
    ConeStrands out{
        integrate_strand(params.beta_coeffs(), initial_state(params.beta_coeffs(), params.B),
                         s_lo, s_hi, tol),
        integrate_strand(params.gamma_coeffs(), initial_state(params.gamma_coeffs(), params.C),
                         t_lo, t_hi, tol)};
    return out;
}

ComplexTriple immersion(const ConeParams& /*params*/, const StrandState& ys,
                        const StrandState& zs, double r) {
    const double f = r * kInvSqrt3;
    return {f * ys.y.z1 * zs.y.z1, f * ys.y.z2 * zs.y.z2, f * ys.y.z3 * zs.y.z3};
}

ComplexTriple immersion(const ConeParams& params, const ConeStrands& strands, double r, double s,
                        double t) {
    return immersion(params, strands.y.at(s), strands.z.at(t), r);
}

TangentFrame tangent_frame(const ConeParams& params, const StrandState& ys,
                           const StrandState& zs, double r) {
    TangentFrame fr;
    const auto& y = ys.y;
    const auto& z = zs.y;
    fr.phi = immersion(params, ys, zs, r);
    fr.d_r = {kInvSqrt3 * y.z1 * z.z1, kInvSqrt3 * y.z2 * z.z2, kInvSqrt3 * y.z3 * z.z3};
    const double rs = r * kInvSqrt3;
    fr.d_s = {rs * params.beta[0] * std::conj(y.z2 * y.z3) * z.z1,
              rs * params.beta[1] * std::conj(y.z3 * y.z1) * z.z2,
              rs * params.beta[2] * std::conj(y.z1 * y.z2) * z.z3};
    fr.d_t = {rs * params.gamma[0] * y.z1 * std::conj(z.z2 * z.z3),
              rs * params.gamma[1] * y.z2 * std::conj(z.z3 * z.z1),
              rs * params.gamma[2] * y.z3 * std::conj(z.z1 * z.z2)};
    return fr;
}

TangentFrame tangent_frame(const ConeParams& params, const ConeStrands& strands, double r,
                           double s, double t) {
    return tangent_frame(params, strands.y.at(s), strands.z.at(t), r);
}

double SlReport::worst() const {
    double w = std::max({omega_rs_max, omega_rt_max, omega_st_max, im_omega_max,
                         radius_defect_max, metric_orth_max});
    if (dimension == 2) w = std::max({w, conformality_max, frame_norm_defect_max});
    return w;
}

SlReport verify_sl(const ConeParams& params, const ConeStrands& strands, const GridSpec& grid,
                   double tol) {
    SlReport rep;
    rep.dimension = 2;
    rep.tol = tol;
    if (grid.ns < 2 || grid.nt < 2)
        throw std::invalid_argument("verify_sl: grid sizes must be at least 2");

    const std::size_t total = std::size_t(grid.ns) * std::size_t(grid.nt);
    std::mutex merge_mutex;
    std::vector<SlReport> partials;

    parallel_for(total, [&](std::size_t idx) {
        const int i = int(idx / std::size_t(grid.nt));
        const int j = int(idx % std::size_t(grid.nt));
        const double s = grid.s0 + (grid.s1 - grid.s0) * double(i) / double(grid.ns - 1);
        const double t = grid.t0 + (grid.t1 - grid.t0) * double(j) / double(grid.nt - 1);
        const StrandState ys = strands.y.at(s);
        const StrandState zs = strands.z.at(t);
        SlReport local;
        for (double r : grid.r_values) {
            const TangentFrame fr = tangent_frame(params, ys, zs, r);
            const SlResidual res = sl_plane_residual(fr.d_r, fr.d_s, fr.d_t);
            local.omega_rs_max = std::max(local.omega_rs_max, res.omega_rs);
            local.omega_rt_max = std::max(local.omega_rt_max, res.omega_rt);
            local.omega_st_max = std::max(local.omega_st_max, res.omega_st);
            local.im_omega_max = std::max(local.im_omega_max, res.im_omega);
            local.metric_orth_max = std::max(local.metric_orth_max, res.gram_defect);
            local.radius_defect_max =
                std::max(local.radius_defect_max, std::abs(norm_sq(fr.phi) - r * r));
            const double ns2 = norm_sq(fr.d_s), nt2 = norm_sq(fr.d_t);
            local.conformality_max = std::max(local.conformality_max, std::abs(ns2 - nt2));
            const double expected =
                2.0 * r * r * (params.a + params.b * ys.v + params.c * zs.v);
            local.frame_norm_defect_max =
                std::max(local.frame_norm_defect_max, std::abs(ns2 - expected));
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        partials.push_back(local);
    });

    for (const auto& p : partials) {
        rep.omega_rs_max = std::max(rep.omega_rs_max, p.omega_rs_max);
        rep.omega_rt_max = std::max(rep.omega_rt_max, p.omega_rt_max);
        rep.omega_st_max = std::max(rep.omega_st_max, p.omega_st_max);
        rep.im_omega_max = std::max(rep.im_omega_max, p.im_omega_max);
        rep.metric_orth_max = std::max(rep.metric_orth_max, p.metric_orth_max);
        rep.radius_defect_max = std::max(rep.radius_defect_max, p.radius_defect_max);
        rep.conformality_max = std::max(rep.conformality_max, p.conformality_max);
        rep.frame_norm_defect_max =
            std::max(rep.frame_norm_defect_max, p.frame_norm_defect_max);
    }
    rep.pass = rep.worst() < tol;
    return rep;
}

std::string to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::u1_invariant_a: return "u1_invariant_a";
        case CaseLabel::evolving_quadrics_b: return "evolving_quadrics_b";
        case CaseLabel::reduced_c: return "reduced_c";
        case CaseLabel::generic: return "generic";
    }
    return "generic";
}

CaseLabel classify_case(const ConeParams& params, double tol) {
    if (std::abs(std::abs(params.B) - 1.0) < tol || std::abs(std::abs(params.C) - 1.0) < tol)
        return CaseLabel::u1_invariant_a;
    if (std::abs(params.B) < tol || std::abs(params.C) < tol)
        return CaseLabel::evolving_quadrics_b;
    for (int j = 0; j < 3; ++j)
        if (std::abs(params.beta[j]) < tol || std::abs(params.gamma[j]) < tol)
            return CaseLabel::reduced_c;
    return CaseLabel::generic;
}

double area_formula(const ConeParams& params, double S, double T, const Lattice2& lattice,
                    double int_v, double int_w) {
    const long N = lattice.det_abs();
    if (N == 0) throw degenerate_lattice_error("area: lattice determinant is zero");
    return 2.0 * double(N)
           * (params.a * S * T + params.b * T * int_v + params.c * S * int_w);
}

double area(const ConeParams& params, double S, double T, const Lattice2& lattice,
            const ConeStrands& strands) {
    const long N = lattice.det_abs();
    if (N == 0) throw degenerate_lattice_error("area: lattice determinant is zero");
    const double int_v =
        adaptive_simpson([&](double s) { return strands.y.potential_at(s); }, 0.0, S, 1e-10);
    const double int_w =
        adaptive_simpson([&](double t) { return strands.z.potential_at(t); }, 0.0, T, 1e-10);
    return area_formula(params, S, T, lattice, int_v, int_w);
}

} // namespace slc
