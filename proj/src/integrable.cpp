#include "slcone/integrable.hpp"

#include <cmath>

#include "slcone/util.hpp"

namespace slc {
namespace {

constexpr double kInvSqrt3 = 0.57735026918962576451;
const Complex kI(0.0, 1.0);

struct XiBranch {
    double r = 0, theta = 0;
    Complex root3;      // xi^{1/3} = r^{1/3} e^{i theta/3}
    double r13 = 0;     // r^{1/3}
    Complex ph13, ph23; // e^{i theta/3}, e^{2 i theta/3}
};

XiBranch xi_branch(const ConeParams& params) {
    XiBranch b;
    b.r = std::abs(params.xi);
    if (b.r == 0)
        throw std::domain_error("xi_branch: isotropic parameters (xi = 0)");
    b.theta = std::atan2(params.xi.imag(), params.xi.real());
    b.r13 = std::cbrt(b.r);
    b.ph13 = std::polar(1.0, b.theta / 3.0);
    b.ph23 = std::polar(1.0, 2.0 * b.theta / 3.0);
    b.root3 = b.r13 * b.ph13;
    return b;
}

// phi_1 and -f * phi_-1 share the building blocks: the beta-derivative part
// and i * gamma-derivative part of d phi_0.
struct LiftParts {
    ComplexTriple dbeta, igamma;
    double f = 0;
};

LiftParts lift_parts(const ConeParams& p, const StrandState& ys, const StrandState& zs) {
    LiftParts lp;
    const auto& y = ys.y;
    const auto& z = zs.y;
    lp.dbeta = {p.beta[0] * std::conj(y.z2 * y.z3) * z.z1,
                p.beta[1] * std::conj(y.z3 * y.z1) * z.z2,
                p.beta[2] * std::conj(y.z1 * y.z2) * z.z3};
    lp.igamma = {kI * p.gamma[0] * y.z1 * std::conj(z.z2 * z.z3),
                 kI * p.gamma[1] * y.z2 * std::conj(z.z3 * z.z1),
                 kI * p.gamma[2] * y.z3 * std::conj(z.z1 * z.z2)};
    lp.f = p.a + p.b * ys.v + p.c * zs.v;
    return lp;
}

HarmonicTriple triple_from_parts(const LiftParts& lp, const StrandState& ys,
                                 const StrandState& zs) {
    HarmonicTriple tr;
    const double half = 0.5 * kInvSqrt3;
    tr.phi_0 = {kInvSqrt3 * ys.y.z1 * zs.y.z1, kInvSqrt3 * ys.y.z2 * zs.y.z2,
                kInvSqrt3 * ys.y.z3 * zs.y.z3};
    tr.phi_1 = half * (lp.dbeta - lp.igamma);
    tr.phi_m1 = (-half / lp.f) * (lp.dbeta + lp.igamma);
    return tr;
}

// Central d/dz = (1/2)(d/ds - i d/dt) of a triple-valued field, plain
// coordinate z = s + i t.
template <class F>
ComplexTriple fd_dz(const F& field, double s, double t, double h) {
    const ComplexTriple ds_ = (1.0 / (2.0 * h)) * (field(s + h, t) - field(s - h, t));
    const ComplexTriple dt_ = (1.0 / (2.0 * h)) * (field(s, t + h) - field(s, t - h));
    return 0.5 * (ds_ - kI * dt_);
}

template <class F>
Complex fd_dz_scalar(const F& field, double s, double t, double h) {
    const Complex ds_ = (field(s + h, t) - field(s - h, t)) / (2.0 * h);
    const Complex dt_ = (field(s, t + h) - field(s, t - h)) / (2.0 * h);
    return 0.5 * (ds_ - kI * dt_);
}

template <class F>
double fd_laplacian(const F& field, double s, double t, double h) {
    return (field(s + h, t) + field(s - h, t) + field(s, t + h) + field(s, t - h)
            - 4.0 * field(s, t))
           / (h * h);
}

// phi_2 by the harmonic-sequence recursion, derivatives by central
// differences at step h.
ComplexTriple fd_phi2(const ConeParams& params, const ConeStrands& strands, double s, double t,
                      double h) {
    const auto phi1 = [&](double ss, double tt) {
        const StrandState ys = strands.y.at(ss);
        const StrandState zs = strands.z.at(tt);
        return triple_from_parts(lift_parts(params, ys, zs), ys, zs).phi_1;
    };
    const auto logf = [&](double ss, double tt) -> Complex {
        return std::log(params.a + params.b * strands.y.potential_at(ss)
                        + params.c * strands.z.potential_at(tt));
    };
    const ComplexTriple dphi1 = fd_dz(phi1, s, t, h);
    const Complex dlogf = fd_dz_scalar(logf, s, t, h);
    const ComplexTriple p1 = phi1(s, t);
    return dphi1 - dlogf * p1;
}

template <class F>
double grid_max(const FdGrid& grid, const F& fn) {
    double worst = 0;
    for (int i = 0; i < grid.ns; ++i)
        for (int j = 0; j < grid.nt; ++j) {
            const double s =
                grid.s0 + (grid.s1 - grid.s0) * double(i) / double(std::max(1, grid.ns - 1));
            const double t =
                grid.t0 + (grid.t1 - grid.t0) * double(j) / double(std::max(1, grid.nt - 1));
            worst = std::max(worst, fn(s, t));
        }
    return worst;
}

// Support pattern of the lambda^{+1} coefficient: entries (0,2),(1,0),(2,1).
Mat3c cyclic_lower(double val10, double val21, double val02) {
    Mat3c m;
    m(0, 2) = val02;
    m(1, 0) = val10;
    m(2, 1) = val21;
    return m;
}

std::vector<Complex> unit_circle_samples(int n) {
    std::vector<Complex> ls;
    ls.reserve(n);
    for (int k = 0; k < n; ++k)
        ls.push_back(std::polar(1.0, 0.31 + 2.0 * M_PI * double(k) / double(n)));
    return ls;
}

} // namespace

ConePotentials cone_potentials(const ConeParams& params) {
    return {potential_closed_form(params.beta_coeffs(), params.B),
            potential_closed_form(params.gamma_coeffs(), params.C)};
}

PointData point_data(const ConeParams& params, const ConePotentials& potentials, double s,
                     double t) {
    PointData pd;
    pd.v = potentials.v.value(s);
    pd.w = potentials.w.value(t);
    pd.dv = potentials.v.derivative(s);
    pd.dw = potentials.w.derivative(t);
    pd.ddv = 2.0 * params.beta_coeffs().potential_cubic_deriv(pd.v);
    pd.ddw = 2.0 * params.gamma_coeffs().potential_cubic_deriv(pd.w);
    pd.f = params.a + params.b * pd.v + params.c * pd.w;
    if (!(pd.f > 0))
        throw singular_density_error("point_data: conformal density f <= 0");
    pd.g = (0.5 / std::sqrt(pd.f)) * Complex(-params.b * pd.dv, params.c * pd.dw);
    pd.h = (1.0 / (12.0 * pd.f)) * (-params.b * pd.ddv + params.c * pd.ddw);
    return pd;
}

PointData point_data(const ConeParams& params, double s, double t) {
    return point_data(params, cone_potentials(params), s, t);
}

HarmonicTriple harmonic_triple(const ConeParams& params, const ConeStrands& strands, double s,
                               double t) {
    const StrandState ys = strands.y.at(s);
    const StrandState zs = strands.z.at(t);
    const LiftParts lp = lift_parts(params, ys, zs);
    if (!(lp.f > 0))
        throw singular_density_error("harmonic_triple: conformal density f <= 0");
    return triple_from_parts(lp, ys, zs);
}

std::pair<Complex, Conformality> xi_and_classify(const ConeParams& params) {
    const Conformality c =
        params.xi == Complex(0, 0) ? Conformality::isotropic : Conformality::superconformal;
    return {params.xi, c};
}

double return_map_residual(const ConeParams& params, const ConeStrands& strands,
                           const FdGrid& grid, double h) {
    const Complex xi_ret = std::conj(params.xi);
    return grid_max(grid, [&](double s, double t) {
        const ComplexTriple phi2 = fd_phi2(params, strands, s, t, h);
        const HarmonicTriple tr = harmonic_triple(params, strands, s, t);
        return max_abs(phi2 - xi_ret * tr.phi_m1);
    });
}

double return_map_residual_vs_xi(const ConeParams& params, const ConeStrands& strands,
                                 const FdGrid& grid, double h) {
    return grid_max(grid, [&](double s, double t) {
        const ComplexTriple phi2 = fd_phi2(params, strands, s, t, h);
        const HarmonicTriple tr = harmonic_triple(params, strands, s, t);
        return max_abs(phi2 - params.xi * tr.phi_m1);
    });
}

double isotropic_residual(const ConeParams& params, const ConeStrands& strands,
                          const FdGrid& grid, double h) {
    return grid_max(grid, [&](double s, double t) {
        return max_abs(fd_phi2(params, strands, s, t, h));
    });
}

std::array<double, 3> toda_solution(const ConeParams& params, double s, double t) {
    if (params.xi == Complex(0, 0))
        throw std::domain_error("toda_solution: isotropic parameters (xi = 0)");
    const PointData pd = point_data(params, s, t);
    const double r23 = std::pow(std::abs(params.xi), 2.0 / 3.0);
    return {1.0, pd.f / r23, r23 / pd.f};
}

double toda_residual(const ConeParams& params, const FdGrid& grid, double h) {
    const XiBranch xb = xi_branch(params);
    const ConePotentials pots = cone_potentials(params);
    const double r23 = xb.r13 * xb.r13; // |xi|^{2/3}
    const auto chi = [&](int k, double s, double t) {
        const double f = params.a + params.b * pots.v.value(s) + params.c * pots.w.value(t);
        const int kk = ((k % 3) + 3) % 3;
        if (kk == 0) return 1.0;
        if (kk == 1) return f / r23;
        return r23 / f;
    };
    return grid_max(grid, [&](double s, double t) {
        double worst = 0;
        for (int k = 0; k < 3; ++k) {
            const auto logchi = [&](double ss, double tt) { return std::log(chi(k, ss, tt)); };
            const double lhs = fd_laplacian(logchi, s, t, h) / (4.0 * r23);
            const double rhs =
                chi(k + 1, s, t) / chi(k, s, t) - chi(k, s, t) / chi(k - 1, s, t);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return worst;
    });
}

double tzitzeica_residual(const ConeParams& params, const FdGrid& grid, double h) {
    const XiBranch xb = xi_branch(params);
    const ConePotentials pots = cone_potentials(params);
    const double r23 = xb.r13 * xb.r13;
    const auto ft = [&](double ss, double tt) {
        const double f = params.a + params.b * pots.v.value(ss) + params.c * pots.w.value(tt);
        return std::log(f) - (2.0 / 3.0) * std::log(xb.r);
    };
    return grid_max(grid, [&](double s, double t) {
        const double lhs = fd_laplacian(ft, s, t, h) / (4.0 * r23);
        const double f0 = ft(s, t);
        return std::abs(lhs - (std::exp(-2.0 * f0) - std::exp(f0)));
    });
}

ConnectionCoeffs connection_coeffs(const ConeParams& params, const ConePotentials& pots,
                                   double s, double t) {
    const XiBranch xb = xi_branch(params);
    const PointData pd = point_data(params, pots, s, t);
    const double sqf = std::sqrt(pd.f);
    const double rm13 = 1.0 / xb.r13;
    ConnectionCoeffs cc;
    cc.a1p = rm13 * cyclic_lower(sqf, xb.r / pd.f, sqf);
    Mat3c m;
    m(0, 1) = sqf;
    m(1, 2) = xb.r / pd.f;
    m(2, 0) = sqf;
    cc.am1pp = Complex(-rm13, 0) * m;
    // Chain rule: d/dz = (1/(2 xi^{1/3})) (d/ds - i d/dt) on log f.
    const Complex dzlogf =
        Complex(params.b * pd.dv, -params.c * pd.dw) / (2.0 * xb.root3 * pd.f);
    const Complex dzblogf =
        Complex(params.b * pd.dv, params.c * pd.dw) / (2.0 * std::conj(xb.root3) * pd.f);
    cc.a0p = Mat3c::diag(0.0, 0.5 * dzlogf, -0.5 * dzlogf);
    cc.a0pp = Mat3c::diag(0.0, -0.5 * dzblogf, 0.5 * dzblogf);
    return cc;
}

ConnectionCoeffs connection_coeffs(const ConeParams& params, double s, double t) {
    return connection_coeffs(params, cone_potentials(params), s, t);
}

double flatness_residual(const ConeParams& params, double s, double t, Complex lambda,
                         double h) {
    const XiBranch xb = xi_branch(params);
    const ConePotentials pots = cone_potentials(params);
    const auto Amat = [&](double ss, double tt) {
        const ConnectionCoeffs cc = connection_coeffs(params, pots, ss, tt);
        return lambda * cc.a1p + cc.a0p;
    };
    const auto Bmat = [&](double ss, double tt) {
        const ConnectionCoeffs cc = connection_coeffs(params, pots, ss, tt);
        return (1.0 / lambda) * cc.am1pp + cc.a0pp;
    };
    const auto fd_matrix = [&](const auto& field, bool holo) {
        const Mat3c ds_ =
            (1.0 / (2.0 * h)) * (field(s + h, t) - field(s - h, t));
        const Mat3c dt_ =
            (1.0 / (2.0 * h)) * (field(s, t + h) - field(s, t - h));
        const Complex factor = holo ? 1.0 / (2.0 * xb.root3) : 1.0 / (2.0 * std::conj(xb.root3));
        return holo ? factor * (ds_ - kI * dt_) : factor * (ds_ + kI * dt_);
    };
    const Mat3c res = fd_matrix(Bmat, true) - fd_matrix(Amat, false)
                      + commutator(Amat(s, t), Bmat(s, t));
    return max_abs(res);
}

double connection_equivariance_defect(const ConnectionCoeffs& conn,
                                      const std::vector<Complex>& lambdas) {
    const Complex zeta = std::polar(1.0, 2.0 * M_PI / 3.0);
    const Mat3c U = Mat3c::diag(1.0, zeta, zeta * zeta);
    const Mat3c Uinv = Mat3c::diag(1.0, std::conj(zeta), std::conj(zeta * zeta));
    double worst = 0;
    for (const Complex& lam : lambdas) {
        const Mat3c a_lam = lam * conn.a1p + conn.a0p;
        const Mat3c a_zlam = (zeta * lam) * conn.a1p + conn.a0p;
        worst = std::max(worst, max_abs(a_zlam - U * a_lam * Uinv));
        const Mat3c b_lam = (1.0 / lam) * conn.am1pp + conn.a0pp;
        const Mat3c b_zlam = (1.0 / (zeta * lam)) * conn.am1pp + conn.a0pp;
        worst = std::max(worst, max_abs(b_zlam - U * b_lam * Uinv));
    }
    return worst;
}

Mat3c KillingField::at_lambda(Complex lambda) const {
    const Complex il = 1.0 / lambda;
    Mat3c sum = coeff(0);
    sum = sum + lambda * coeff(1) + (lambda * lambda) * coeff(2);
    sum = sum + il * coeff(-1) + (il * il) * coeff(-2);
    return sum;
}

KillingField killing_field(const ConeParams& params, const ConePotentials& pots, double s,
                           double t) {
    const XiBranch xb = xi_branch(params);
    const PointData pd = point_data(params, pots, s, t);
    const double rfm = xb.r / std::sqrt(pd.f);
    KillingField kf;
    kf.theta_branch = xb.theta;

    Mat3c m2;
    m2(0, 1) = rfm;
    m2(1, 2) = pd.f;
    m2(2, 0) = rfm;
    kf.tau[4] = (kI * xb.ph23) * m2;

    Mat3c m1;
    m1(0, 2) = pd.g;
    m1(1, 0) = -pd.g;
    kf.tau[3] = (kI * xb.ph13) * m1;

    kf.tau[2] = Mat3c::diag(kI * 2.0 * pd.h, -kI * pd.h, -kI * pd.h);

    Mat3c mm1;
    mm1(0, 1) = -std::conj(pd.g);
    mm1(2, 0) = std::conj(pd.g);
    kf.tau[1] = (kI * std::conj(xb.ph13)) * mm1;

    Mat3c mm2;
    mm2(0, 2) = rfm;
    mm2(1, 0) = rfm;
    mm2(2, 1) = pd.f;
    kf.tau[0] = (kI * std::conj(xb.ph23)) * mm2;
    return kf;
}

KillingField killing_field(const ConeParams& params, double s, double t) {
    return killing_field(params, cone_potentials(params), s, t);
}

double killing_reality_defect(const KillingField& kf, int samples) {
    double worst = 0;
    for (const Complex& lam : unit_circle_samples(samples)) {
        const Mat3c t = kf.at_lambda(lam);
        worst = std::max(worst, max_abs(t + dagger(t)));
    }
    return worst;
}

double killing_equivariance_defect(const KillingField& kf, int samples) {
    const Complex zeta = std::polar(1.0, 2.0 * M_PI / 3.0);
    const Mat3c U = Mat3c::diag(1.0, zeta, zeta * zeta);
    const Mat3c Uinv = Mat3c::diag(1.0, std::conj(zeta), std::conj(zeta * zeta));
    double worst = 0;
    for (const Complex& lam : unit_circle_samples(samples)) {
        const Mat3c lhs = kf.at_lambda(zeta * lam);
        const Mat3c rhs = U * kf.at_lambda(lam) * Uinv;
        worst = std::max(worst, max_abs(lhs - rhs));
    }
    return worst;
}

Mat3c kappa(const Mat3c& m) {
    // -P m^T P with P the (2,3) swap.
    static const std::array<int, 3> p = {0, 2, 1};
    Mat3c r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = -m(p[j], p[i]);
    return r;
}

double killing_kappa_defect(const KillingField& kf, int samples) {
    double worst = 0;
    for (const Complex& lam : unit_circle_samples(samples)) {
        const Mat3c lhs = kappa(kf.at_lambda(lam));
        const Mat3c rhs = Complex(-1.0, 0.0) * kf.at_lambda(-lam);
        worst = std::max(worst, max_abs(lhs - rhs));
    }
    return worst;
}

double killing_residual(const ConeParams& params, const FdGrid& grid, double h) {
    const XiBranch xb = xi_branch(params);
    const ConePotentials pots = cone_potentials(params);
    const auto tau_n = [&](int n, double ss, double tt) {
        return killing_field(params, pots, ss, tt).coeff(n);
    };
    return grid_max(grid, [&](double s, double t) {
        const ConnectionCoeffs cc = connection_coeffs(params, pots, s, t);
        const KillingField kf = killing_field(params, pots, s, t);
        const auto coeff_or_zero = [&](int n) {
            return (n >= -2 && n <= 2) ? kf.coeff(n) : Mat3c::zero();
        };
        double worst = 0;
        for (int n = -2; n <= 2; ++n) {
            const Mat3c ds_ =
                (1.0 / (2.0 * h)) * (tau_n(n, s + h, t) - tau_n(n, s - h, t));
            const Mat3c dt_ =
                (1.0 / (2.0 * h)) * (tau_n(n, s, t + h) - tau_n(n, s, t - h));
            const Mat3c dz = (1.0 / (2.0 * xb.root3)) * (ds_ - kI * dt_);
            const Mat3c dzb = (1.0 / (2.0 * std::conj(xb.root3))) * (ds_ + kI * dt_);
            const Mat3c r1 = dz - commutator(coeff_or_zero(n), cc.a0p)
                             - commutator(coeff_or_zero(n - 1), cc.a1p);
            const Mat3c r2 = dzb - commutator(coeff_or_zero(n), cc.a0pp)
                             - commutator(coeff_or_zero(n + 1), cc.am1pp);
            worst = std::max({worst, max_abs(r1), max_abs(r2)});
        }
        return worst;
    });
}

FiniteTypeReport finite_type_certificate(const ConeParams& params, double s, double t) {
    const XiBranch xb = xi_branch(params);
    const ConePotentials pots = cone_potentials(params);
    const ConnectionCoeffs cc = connection_coeffs(params, pots, s, t);
    const KillingField kf = killing_field(params, pots, s, t);

    // Laurent coefficients of tau^2 (degrees -4..4).
    std::array<Mat3c, 9> sq; // sq[n + 4]
    for (int n = -4; n <= 4; ++n) {
        Mat3c acc = Mat3c::zero();
        for (int i = -2; i <= 2; ++i) {
            const int j = n - i;
            if (j < -2 || j > 2) continue;
            acc = acc + kf.coeff(i) * kf.coeff(j);
        }
        sq[n + 4] = acc;
    }

    // eta = (conj(xi)^{-4/3} lambda^{-3} - xi^{-4/3} lambda^3) tau^2, the sign
    // fixed so the top coefficients realize the finite-type normalization
    // eta_7 = a1p, eta_6 = 2 a0p.
    const Complex xi43 = std::pow(xb.r, 4.0 / 3.0) * std::polar(1.0, 4.0 * xb.theta / 3.0);
    const Complex cpos = -1.0 / xi43;             // multiplies lambda^3 * tau^2
    const Complex cneg = 1.0 / std::conj(xi43);   // multiplies lambda^-3 * tau^2

    const auto eta = [&](int n) {
        Mat3c acc = Mat3c::zero();
        if (n - 3 >= -4 && n - 3 <= 4) acc = acc + cpos * sq[n - 3 + 4];
        if (n + 3 >= -4 && n + 3 <= 4) acc = acc + cneg * sq[n + 3 + 4];
        return acc;
    };

    FiniteTypeReport rep;
    rep.defect_top = max_abs(eta(7) - cc.a1p);
    rep.defect_next = max_abs(eta(6) - (2.0 * cc.a0p));
    rep.degree_excess = max_abs(eta(8));
    rep.degree = 7;
    return rep;
}

Complex primed_lift_det(const ConeParams& params, const ConeStrands& strands, double s,
                        double t) {
    const XiBranch xb = xi_branch(params);
    const HarmonicTriple tr = harmonic_triple(params, strands, s, t);
    const ComplexTriple p0 = Complex(0, -1) * tr.phi_0;
    const ComplexTriple p1 = (Complex(0, -1) / xb.root3) * tr.phi_1;
    const ComplexTriple p2 = (Complex(0, 1) * xb.root3) * tr.phi_m1;
    return holomorphic_volume(p0, p1, p2);
}

} // namespace slc
