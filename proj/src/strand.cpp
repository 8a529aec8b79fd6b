#include "slcone/strand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "slcone/quadrature.hpp"

namespace slc {
namespace {

using Vec = std::array<double, 7>;

Vec encode(const StrandState& st) {
    return {st.y.z1.real(), st.y.z2.real(), st.y.z3.real(),
            st.y.z1.imag(), st.y.z2.imag(), st.y.z3.imag(), st.v};
}

Vec axpy(const Vec& y, double a, const Vec& x) {
    Vec r;
    for (int i = 0; i < 7; ++i) r[i] = y[i] + a * x[i];
    return r;
}

// Dormand-Prince 5(4) tableau with the classic quartic dense-output weights.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct StrandSystem {
    StrandCoefficients coeffs;

    Vec operator()(double /*s*/, const Vec& u) const {
        const Complex y1(u[0], u[3]), y2(u[1], u[4]), y3(u[2], u[5]);
        const Complex d1_ = coeffs.c1 * std::conj(y2 * y3);
        const Complex d2_ = coeffs.c2 * std::conj(y3 * y1);
        const Complex d3_ = coeffs.c3 * std::conj(y1 * y2);
        return {d1_.real(), d2_.real(), d3_.real(),
                d1_.imag(), d2_.imag(), d3_.imag(), 2.0 * (y1 * y2 * y3).real()};
    }
};

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double rtol, double atol) {
    double sum = 0;
    for (int i = 0; i < 7; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / sc;
        sum += q * q;
    }
    return std::sqrt(sum / 7);
}

double vec_max_y(const Vec& u) {
    double m = 0;
    for (int i = 0; i < 6; ++i) m = std::max(m, std::abs(u[i]));
    return m;
}

struct StepResult {
    Vec y1;
    Vec k_last;
    std::array<Vec, 5> rcont;
    double err;
};

StepResult dopri_step(const StrandSystem& f, double t, const Vec& y, const Vec& k1, double h,
                      double rtol, double atol) {
    Vec k2 = f(t + c2 * h, axpy(y, h * a21, k1));
    Vec tmp = y;
    for (int i = 0; i < 7; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    Vec k3 = f(t + c3 * h, tmp);
    for (int i = 0; i < 7; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    Vec k4 = f(t + c4 * h, tmp);
    for (int i = 0; i < 7; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    Vec k5 = f(t + c5 * h, tmp);
    for (int i = 0; i < 7; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    Vec k6 = f(t + h, tmp);
    StepResult r;
    for (int i = 0; i < 7; ++i)
        r.y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    r.k_last = f(t + h, r.y1);
    Vec err;
    for (int i = 0; i < 7; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i]
                      + e7 * r.k_last[i]);
    r.err = error_norm(err, y, r.y1, rtol, atol);
    // Dense output on [t, t+h]: u(theta) = r0 + th(r1 + (1-th)(r2 + th(r3 + (1-th) r4))).
    for (int i = 0; i < 7; ++i) {
        const double ydiff = r.y1[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        r.rcont[0][i] = y[i];
        r.rcont[1][i] = ydiff;
        r.rcont[2][i] = bspl;
        r.rcont[3][i] = ydiff - h * r.k_last[i] - bspl;
        r.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i]
                             + d7 * r.k_last[i]);
    }
    return r;
}

Vec dense_eval(const std::array<Vec, 5>& rcont, double theta) {
    Vec u;
    const double th1 = 1.0 - theta;
    for (int i = 0; i < 7; ++i)
        u[i] = rcont[0][i]
             + theta * (rcont[1][i]
                        + th1 * (rcont[2][i] + theta * (rcont[3][i] + th1 * rcont[4][i])));
    return u;
}

// Integrates from t0 toward t_end (either direction); appends accepted
// segments. Returns the parameter where integration stopped (== t_end unless
// escape). `escaped` reports blow-up.
double run_direction(const StrandSystem& f, Vec y, double t0, double t_end, double rtol,
                     double atol, const IntegrateOptions& opt,
                     std::vector<Trajectory::Segment>& out, bool& escaped) {
    escaped = false;
    if (t0 == t_end) return t0;
    const double dir = t_end > t0 ? 1.0 : -1.0;
    double t = t0;
    Vec k1 = f(t, y);
    // Initial step size: conservative power-law guess.
    double h = dir * std::min(0.1, std::pow(rtol, 0.2));
    h = dir * std::min(std::abs(h), std::abs(t_end - t0));
    std::size_t steps = 0;
    const double hmin_abs = 16.0 * std::numeric_limits<double>::epsilon();
    while (dir * (t_end - t) > 0) {
        if (++steps > opt.max_steps)
            throw std::runtime_error("integrate_strand: step limit exceeded");
        if (dir * (t + h - t_end) > 0) h = t_end - t;
        StepResult st = dopri_step(f, t, y, k1, h, rtol, atol);
        const bool finite = std::isfinite(st.err) && std::isfinite(vec_max_y(st.y1));
        if (finite && st.err <= 1.0) {
            Trajectory::Segment seg;
            seg.t0 = t;
            seg.h = h;
            seg.rcont = st.rcont;
            out.push_back(seg);
            t += h;
            y = st.y1;
            k1 = st.k_last;
            if (vec_max_y(y) > opt.blowup_ceiling) {
                escaped = true;
                return t;
            }
            const double fac = std::clamp(0.9 * std::pow(st.err, -0.2), 0.2, 5.0);
            h *= fac;
        } else {
            const double fac =
                finite ? std::clamp(0.9 * std::pow(st.err, -0.2), 0.1, 0.9) : 0.25;
            h *= fac;
            if (std::abs(h) < hmin_abs * std::max(1.0, std::abs(t))) {
                // Cannot resolve further: treat as escape at current t.
                escaped = true;
                return t;
            }
        }
    }
    return t;
}

// Locates the escape parameter: bisect the ceiling crossing on the last dense
// segment, then add the leading-order blow-up tail s_inf ~ s_c + c_j / |y_j|.
double locate_escape(const StrandCoefficients& coeffs, const Trajectory::Segment& seg,
                     double ceiling) {
    double lo = 0.0, hi = 1.0;
    if (vec_max_y(dense_eval(seg.rcont, hi)) < ceiling) {
        lo = hi = 1.0; // escape detected by step failure; use segment end
    }
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (vec_max_y(dense_eval(seg.rcont, mid)) >= ceiling)
            hi = mid;
        else
            lo = mid;
    }
    const double s_c = seg.t0 + hi * seg.h;
    const Vec u = dense_eval(seg.rcont, hi);
    // |y_j| ~ c_j / |s_inf - s| with c_j = sqrt(|a_j| / |a_k a_l|) when all
    // coefficients are nonzero; average the three component estimates.
    const std::array<double, 3> cf = coeffs.as_array();
    double tail = 0;
    int terms = 0;
    for (int j = 0; j < 3; ++j) {
        const int k = (j + 1) % 3, l = (j + 2) % 3;
        if (cf[j] == 0 || cf[k] == 0 || cf[l] == 0) continue;
        const double cj = std::sqrt(std::abs(cf[j]) / std::abs(cf[k] * cf[l]));
        const double yj = std::hypot(u[j], u[j + 3]);
        if (yj > 0) {
            tail += cj / yj;
            ++terms;
        }
    }
    const double dir = seg.h >= 0 ? 1.0 : -1.0;
    return terms > 0 ? s_c + dir * tail / terms : s_c;
}

} // namespace

StrandCoefficients::StrandCoefficients(double a, double b, double c, bool zs)
    : c1(a), c2(b), c3(c), zero_sum(zs) {
    if (c1 == 0 && c2 == 0 && c3 == 0)
        throw std::invalid_argument("StrandCoefficients: all coefficients zero");
    if (zero_sum && std::abs(c1 + c2 + c3) >= 1e-12)
        throw std::invalid_argument("StrandCoefficients: zero-sum flag violated");
}

double StrandCoefficients::potential_cubic(double v) const {
    return (c1 * v + 1) * (c2 * v + 1) * (c3 * v + 1);
}

double StrandCoefficients::potential_cubic_deriv(double v) const {
    return c1 * (c2 * v + 1) * (c3 * v + 1) + c2 * (c1 * v + 1) * (c3 * v + 1)
         + c3 * (c1 * v + 1) * (c2 * v + 1);
}

StrandDerivative strand_derivative(const StrandCoefficients& coeffs, const StrandState& state) {
    const auto& y = state.y;
    StrandDerivative d;
    d.dy.z1 = coeffs.c1 * std::conj(y.z2 * y.z3);
    d.dy.z2 = coeffs.c2 * std::conj(y.z3 * y.z1);
    d.dy.z3 = coeffs.c3 * std::conj(y.z1 * y.z2);
    d.dv = 2.0 * (y.z1 * y.z2 * y.z3).real();
    return d;
}

double conserved_level(const StrandState& state) {
    return (state.y.z1 * state.y.z2 * state.y.z3).imag();
}

double constraint_residual(const StrandCoefficients& coeffs, const StrandState& state) {
    double worst = 0;
    for (int j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(std::norm(state.y[j]) - (coeffs[j] * state.v + 1)));
    return worst;
}

StrandState initial_state(const StrandCoefficients& coeffs, double B,
                          const std::array<double, 3>& phase_offset) {
    (void)coeffs;
    if (!(std::abs(B) <= 1.0))
        throw invalid_level_error("initial_state: conserved level must satisfy |B| <= 1");
    if (std::abs(phase_offset[0] + phase_offset[1] + phase_offset[2]) > 1e-9)
        throw std::invalid_argument("initial_state: phase offset must have zero sum");
    const double d3 = std::asin(B);
    StrandState st;
    st.y.z1 = std::polar(1.0, phase_offset[0]);
    st.y.z2 = std::polar(1.0, phase_offset[1]);
    st.y.z3 = std::polar(1.0, d3 + phase_offset[2]);
    st.v = 0;
    st.s = 0;
    return st;
}

StrandState Trajectory::decode(const Vec& u, double s) const {
    StrandState st;
    st.y.z1 = {u[0], u[3]};
    st.y.z2 = {u[1], u[4]};
    st.y.z3 = {u[2], u[5]};
    st.v = u[6];
    st.s = s;
    return st;
}

const Trajectory::Segment& Trajectory::segment_for(double s) const {
    // Forward segments have t0 ascending with positive h; backward descending
    // with negative h.
    if (!fwd_.empty() && s >= fwd_.front().t0) {
        auto it = std::upper_bound(fwd_.begin(), fwd_.end(), s,
                                   [](double val, const Segment& g) { return val < g.t0; });
        if (it != fwd_.begin()) --it;
        return *it;
    }
    if (!bwd_.empty()) {
        auto it = std::upper_bound(bwd_.begin(), bwd_.end(), s,
                                   [](double val, const Segment& g) { return val > g.t0; });
        if (it != bwd_.begin()) --it;
        return *it;
    }
    return fwd_.front();
}

StrandState Trajectory::at(double s) const {
    if (!covers(s))
        throw coverage_error("Trajectory::at: parameter outside integrated span");
    s = std::clamp(s, lo_, hi_);
    if (fwd_.empty() && bwd_.empty())
        throw coverage_error("Trajectory::at: empty trajectory");
    const Segment& seg = segment_for(s);
    const double theta = seg.h != 0 ? (s - seg.t0) / seg.h : 0.0;
    return decode(dense_eval(seg.rcont, std::clamp(theta, 0.0, 1.0)), s);
}

double Trajectory::conservation_drift(std::size_t n) const {
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = lo_ + (hi_ - lo_) * double(i) / double(n - 1);
        worst = std::max(worst, std::abs(conserved_level(at(s)) - level_));
    }
    return worst;
}

double Trajectory::constraint_drift(std::size_t n) const {
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = lo_ + (hi_ - lo_) * double(i) / double(n - 1);
        worst = std::max(worst, constraint_residual(coeffs_, at(s)));
    }
    return worst;
}

Trajectory integrate_strand(const StrandCoefficients& coeffs, const StrandState& initial,
                            double lo, double hi, double tol, const IntegrateOptions& options) {
    if (!(tol > 0)) throw std::invalid_argument("integrate_strand: tol must be positive");
    if (!(lo <= initial.s && initial.s <= hi))
        throw std::invalid_argument("integrate_strand: span must contain the initial parameter");
    if (!initial.y.finite())
        throw std::invalid_argument("integrate_strand: non-finite initial state");

    const StrandSystem sys{coeffs};
    const double rtol = tol, atol = 1e-3 * tol;

    Trajectory traj;
    traj.coeffs_ = coeffs;
    traj.level_ = conserved_level(initial);

    const Vec u0 = encode(initial);
    bool esc_f = false, esc_b = false;
    double end_f = initial.s, end_b = initial.s;
    if (hi > initial.s)
        end_f = run_direction(sys, u0, initial.s, hi, rtol, atol, options, traj.fwd_, esc_f);
    if (lo < initial.s)
        end_b = run_direction(sys, u0, initial.s, lo, rtol, atol, options, traj.bwd_, esc_b);

    if ((esc_f || esc_b) && options.throw_on_escape) {
        const auto& seg = esc_f ? traj.fwd_.back() : traj.bwd_.back();
        const double where = locate_escape(coeffs, seg, options.blowup_ceiling);
        throw finite_escape_error("integrate_strand: solution escaped past the ceiling", where);
    }

    traj.lo_ = traj.bwd_.empty() ? initial.s : end_b;
    traj.hi_ = traj.fwd_.empty() ? initial.s : end_f;
    if (traj.fwd_.empty() && traj.bwd_.empty()) {
        // Degenerate zero-length span: keep a constant segment.
        Trajectory::Segment seg;
        seg.t0 = initial.s;
        seg.h = 0;
        for (auto& rc : seg.rcont) rc = Vec{};
        seg.rcont[0] = u0;
        traj.fwd_.push_back(seg);
    }
    traj.nodes_.reserve(traj.fwd_.size() + traj.bwd_.size() + 1);
    for (auto it = traj.bwd_.rbegin(); it != traj.bwd_.rend(); ++it)
        traj.nodes_.push_back(it->t0 + it->h);
    traj.nodes_.push_back(initial.s);
    for (const auto& seg : traj.fwd_) traj.nodes_.push_back(seg.t0 + seg.h);
    return traj;
}

double phase_integral(const StrandCoefficients& coeffs, double B, const Trajectory& traj,
                      int j, double s) {
    if (j < 0 || j > 2) throw std::invalid_argument("phase_integral: component out of range");
    const double cj = coeffs[j];
    if (cj == 0 || B == 0) return 0.0;
    const auto integrand = [&](double sigma) {
        const double den = cj * traj.potential_at(sigma) + 1.0;
        if (!(den > 0))
            throw pole_error("phase_integral: constraint pole c_j v + 1 <= 0");
        return 1.0 / den;
    };
    const double val = adaptive_simpson(integrand, 0.0, s, 1e-12);
    return -cj * B * val;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t samples) {
    os << "s,re_y1,im_y1,re_y2,im_y2,re_y3,im_y3,v,conservation_residual\n";
    os.precision(17);
    for (std::size_t i = 0; i < samples; ++i) {
        const double s = traj.lo() + (traj.hi() - traj.lo()) * double(i) / double(samples - 1);
        const StrandState st = traj.at(s);
        os << s << ',' << st.y.z1.real() << ',' << st.y.z1.imag() << ',' << st.y.z2.real()
           << ',' << st.y.z2.imag() << ',' << st.y.z3.real() << ',' << st.y.z3.imag() << ','
           << st.v << ',' << conserved_level(st) - traj.level() << '\n';
    }
}

} // namespace slc
