#include "slcone/periodicity.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "slcone/quadrature.hpp"
#include "slcone/util.hpp"

namespace slc {
namespace {

long gcd_l(long a, long b) { return std::gcd(std::abs(a), std::abs(b)); }

long lcm_l(long a, long b) {
    if (a == 0 || b == 0) return 0;
    return std::abs(a / gcd_l(a, b) * b);
}

// Integral of 1/(c_j v + 1) over one full potential period. With
// v = base + span sn^2(u0 + k s, m) this is a complete elliptic integral of
// the third kind: (2 / (k A)) Pi(-span c_j / A, m) with A = 1 + c_j base.
double phase_ratio_integral(const StrandCoefficients& coeffs, const EllipticForm& form, int j,
                            double S) {
    const double cj = coeffs[j];
    if (cj == 0 || form.constant()) return S;
    const double A = 1.0 + cj * form.base;
    const double n = -cj * form.span / A;
    if (!(A > 0) || !(n < 1)) throw pole_error("rotation_phases: constraint pole");
    return 2.0 / (form.freq_k * A) * complete_elliptic_pi(n, form.modulus_m);
}

std::array<double, 3> phases_from_form(const StrandCoefficients& coeffs, double B,
                                       const EllipticForm& form, double S) {
    std::array<double, 3> eta{};
    if (B == 0) return eta;
    for (int j = 0; j < 3; ++j) {
        if (coeffs[j] == 0) {
            eta[j] = 0;
            continue;
        }
        eta[j] = -coeffs[j] * B * phase_ratio_integral(coeffs, form, j, S);
    }
    return eta;
}

// Quasi-phases of the strand itself: y_j(s + S) = e^{i eta_j} y_j(s). For
// level zero the polar phases are constant, but any component whose norm
// constraint vanishes at a turning point of the potential crosses zero there
// and flips sign once per period, contributing a quasi-phase of pi.
std::array<double, 3> strand_quasi_phases(const StrandCoefficients& coeffs, double B,
                                          const EllipticForm& form, double S) {
    if (B != 0) return phases_from_form(coeffs, B, form, S);
    std::array<double, 3> eta{};
    if (form.constant()) return eta;
    const double lo = std::min(form.base, form.base + form.span);
    const double hi = std::max(form.base, form.base + form.span);
    for (int j = 0; j < 3; ++j) {
        if (coeffs[j] == 0) continue;
        for (double root : {lo, hi})
            if (std::abs(coeffs[j] * root + 1.0) < 1e-9) eta[j] = M_PI;
    }
    return eta;
}

// Rationals p/q in [lo, hi] with q <= max_den, lowest terms.
std::vector<Rational> rationals_in_range(double lo, double hi, long max_den) {
    if (lo > hi) std::swap(lo, hi);
    std::vector<Rational> out;
    for (long q = 1; q <= max_den; ++q) {
        const long pmin = long(std::ceil(lo * double(q) - 1e-12));
        const long pmax = long(std::floor(hi * double(q) + 1e-12));
        for (long p = pmin; p <= pmax; ++p) {
            if (gcd_l(p, q) != 1) continue;
            out.push_back({p, q});
        }
    }
    return out;
}

// Periods blow up logarithmically toward a homoclinic level; points that
// close cannot carry useful rational data, so they are skipped.
constexpr double kMaxPotentialPeriod = 60.0;

struct ZPhaseData {
    bool ok = false;
    double T = 0;
    std::array<double, 3> zeta{};
};

ZPhaseData z_phase_data(const ConeParams& params, double C) {
    ZPhaseData d;
    const StrandCoefficients gc = params.gamma_coeffs();
    try {
        const EllipticForm form = potential_closed_form(gc, C);
        if (form.constant() || form.homoclinic()) return d;
        d.T = form.period();
        if (!std::isfinite(d.T) || d.T <= 0 || d.T > kMaxPotentialPeriod) return d;
        d.zeta = strand_quasi_phases(gc, C, form, d.T);
        d.ok = true;
    } catch (const std::exception&) {
        d.ok = false;
    }
    return d;
}

// Single-component variant for sweep and refinement loops: one quadrature
// instead of three.
struct ZDriverData {
    bool ok = false;
    double T = 0;
    double zeta = 0;
};

ZDriverData z_phase_driver(const ConeParams& params, double C, int j) {
    ZDriverData d;
    const StrandCoefficients gc = params.gamma_coeffs();
    try {
        const EllipticForm form = potential_closed_form(gc, C);
        if (form.constant() || form.homoclinic()) return d;
        d.T = form.period();
        if (!std::isfinite(d.T) || d.T <= 0 || d.T > kMaxPotentialPeriod) return d;
        d.zeta = strand_quasi_phases(gc, C, form, d.T)[j];
        d.ok = true;
    } catch (const std::exception&) {
        d.ok = false;
    }
    return d;
}

// Finds C in [c0, c1] with zeta_j(C)/pi == target by Illinois false position
// on the driver component. Assumes a sign change over the bracket.
std::optional<double> refine_driver(const ConeParams& base, int driver, double target_pi_ratio,
                                    double c0, double f0, double c1, double f1) {
    double lo = c0, flo = f0 - target_pi_ratio;
    double hi = c1, fhi = f1 - target_pi_ratio;
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if (flo * fhi > 0) return std::nullopt;
    double mid = lo;
    for (int it = 0; it < 60; ++it) {
        mid = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(mid > std::min(lo, hi) && mid < std::max(lo, hi))) mid = 0.5 * (lo + hi);
        const ZDriverData d = z_phase_driver(base, mid, driver);
        if (!d.ok) return std::nullopt;
        const double fm = d.zeta / M_PI - target_pi_ratio;
        if (std::abs(fm) < 1e-12 || std::abs(hi - lo) < 1e-14) return mid;
        if (flo * fm <= 0) {
            hi = mid;
            fhi = fm;
            flo *= 0.5; // Illinois damping keeps both ends moving
        } else {
            lo = mid;
            flo = fm;
            fhi *= 0.5;
        }
    }
    return mid;
}

struct YRowData {
    bool ok = false;
    PeriodData data;
};

// Periodicity data of the y strand for a given (theta, B) under the case
// assumptions. Case (a): |B| = 1, v constant, period from the rational
// coefficient ratios. Otherwise: potential period + phase rationalization.
YRowData y_row_data(const ConeParams& params, SearchCase sc, long max_den, double tol) {
    YRowData row;
    const StrandCoefficients bc = params.beta_coeffs();
    if (sc == SearchCase::case_a) {
        if (std::abs(std::abs(params.B) - 1.0) > 1e-12) return row;
        // beta_j = n_j / S0 with coprime integers: requires relatively
        // rational coefficients.
        int jmax = 0;
        for (int j = 1; j < 3; ++j)
            if (std::abs(bc[j]) > std::abs(bc[jmax])) jmax = j;
        std::array<long, 3> num{};
        long den = 1;
        for (int j = 0; j < 3; ++j) {
            const auto r = rationalize(bc[j] / bc[jmax], max_den, 1e-9);
            if (!r) return row;
            num[j] = r->p;
            den = lcm_l(den, r->q);
        }
        for (int j = 0; j < 3; ++j) {
            const auto r = rationalize(bc[j] / bc[jmax], max_den, 1e-9);
            num[j] = r->p * (den / r->q);
        }
        long g = 0;
        for (long n : num) g = gcd_l(g, n);
        if (g > 1)
            for (long& n : num) n /= g;
        // S0 from any nonzero component: beta_j = num_j / S0.
        double S0 = 0;
        for (int j = 0; j < 3; ++j)
            if (num[j] != 0) {
                S0 = double(num[j]) / bc[j];
                break;
            }
        row.data.S = 2.0 * M_PI * std::abs(S0);
        row.data.eta = {0, 0, 0};
        row.data.rational_approx = std::array<Rational, 3>{{{0, 1}, {0, 1}, {0, 1}}};
        row.data.torus_multiple = 1;
        row.ok = true;
        return row;
    }
    try {
        const EllipticForm form = potential_closed_form(bc, params.B);
        if (form.constant() || form.homoclinic()) return row;
        const double S = form.period();
        const std::array<double, 3> eta = strand_quasi_phases(bc, params.B, form, S);
        row.data = make_period_data(S, eta, max_den, tol);
        row.ok = row.data.torus_multiple.has_value();
    } catch (const std::exception&) {
        row.ok = false;
    }
    return row;
}

// Direct strand comparison over the full claimed periods.
double verify_candidate(const ConeParams& params, const PeriodData& ydata,
                        const PeriodData& zdata, double integrator_tol) {
    const double Sy = ydata.S * double(ydata.torus_multiple.value_or(1));
    const double Tz = zdata.S * double(zdata.torus_multiple.value_or(1));
    const StrandCoefficients bc = params.beta_coeffs();
    const StrandCoefficients gc = params.gamma_coeffs();
    const Trajectory ytraj =
        integrate_strand(bc, initial_state(bc, params.B), 0.0, Sy + 1.0, integrator_tol);
    const Trajectory ztraj =
        integrate_strand(gc, initial_state(gc, params.C), 0.0, Tz + 1.0, integrator_tol);
    double worst = 0;
    for (double s0 : {0.0, 0.37, 0.9}) {
        const ComplexTriple dy = ytraj.at(s0 + Sy).y - ytraj.at(s0).y;
        const ComplexTriple dz = ztraj.at(s0 + Tz).y - ztraj.at(s0).y;
        worst = std::max({worst, max_abs(dy), max_abs(dz)});
    }
    return worst;
}

} // namespace

std::optional<Rational> rationalize(double x, long max_den, double tol) {
    if (max_den < 1) throw std::invalid_argument("rationalize: max_den must be >= 1");
    if (!std::isfinite(x)) return std::nullopt;

    // Continued-fraction convergents with a final semiconvergent check.
    long p_prev = 1, q_prev = 0; // h_{-1}, k_{-1}
    long p_cur = long(std::floor(x)), q_cur = 1;
    double frac = x - std::floor(x);
    long best_p = p_cur, best_q = 1;

    for (int it = 0; it < 64; ++it) {
        if (std::abs(x - double(p_cur) / double(q_cur))
            < std::abs(x - double(best_p) / double(best_q)))
            best_p = p_cur, best_q = q_cur;
        if (frac < 1e-15) break;
        const double inv = 1.0 / frac;
        const double aint = std::floor(inv);
        if (aint > 1e17) break;
        const long a = long(aint);
        frac = inv - aint;
        const long p_next = a * p_cur + p_prev;
        const long q_next = a * q_cur + q_prev;
        if (q_next > max_den) {
            // Best semiconvergent still within the denominator bound.
            const long k = (max_den - q_prev) / q_cur;
            if (k > 0) {
                const long ps = k * p_cur + p_prev;
                const long qs = k * q_cur + q_prev;
                if (std::abs(x - double(ps) / double(qs))
                    < std::abs(x - double(best_p) / double(best_q)))
                    best_p = ps, best_q = qs;
            }
            break;
        }
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    const long g = gcd_l(best_p, best_q);
    if (g > 1) {
        best_p /= g;
        best_q /= g;
    }
    if (std::abs(x - double(best_p) / double(best_q)) < tol) return Rational{best_p, best_q};
    return std::nullopt;
}

PeriodResult strand_period(const StrandCoefficients& coeffs, double B, double tol) {
    PeriodResult res;
    const EllipticForm form = potential_closed_form(coeffs, B);
    if (form.constant()) {
        res.kind = PeriodResult::Kind::constant_potential;
        return res;
    }
    if (form.homoclinic()) {
        res.kind = PeriodResult::Kind::homoclinic;
        return res;
    }
    res.kind = PeriodResult::Kind::periodic;
    res.S = form.period();

    // Cross-check: event detection on the integrated strand. v(0) = 0 with
    // v'(0) > 0; the next upward zero crossing of v is one period later.
    const Trajectory traj =
        integrate_strand(coeffs, initial_state(coeffs, B), 0.0, 1.6 * res.S, tol);
    const int n = 4000;
    double s_prev = 0.4 * res.S;
    double v_prev = traj.potential_at(s_prev);
    double bracket_lo = 0, bracket_hi = 0;
    bool found = false;
    for (int i = 1; i <= n; ++i) {
        const double s = 0.4 * res.S + (1.55 * res.S - 0.4 * res.S) * double(i) / double(n);
        const double v = traj.potential_at(s);
        if (v_prev < 0 && v >= 0) {
            bracket_lo = s_prev;
            bracket_hi = s;
            found = true;
            break;
        }
        s_prev = s;
        v_prev = v;
    }
    if (!found)
        throw std::runtime_error("strand_period: event detection found no period return");
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (bracket_lo + bracket_hi);
        if (traj.potential_at(mid) >= 0)
            bracket_hi = mid;
        else
            bracket_lo = mid;
        if (bracket_hi - bracket_lo < 1e-14) break;
    }
    res.S_event = 0.5 * (bracket_lo + bracket_hi);
    return res;
}

std::array<double, 3> rotation_phases(const StrandCoefficients& coeffs, double B, double S) {
    if (!(std::abs(B) <= 1.0))
        throw invalid_level_error("rotation_phases: |B| must not exceed 1");
    // |B| = 1 is the constant-potential circle solution: the phase rate is
    // -c_j B throughout, so the advance over any S is well defined.
    const EllipticForm form = potential_closed_form(coeffs, B);
    return phases_from_form(coeffs, B, form, S);
}

PeriodData make_period_data(double S, const std::array<double, 3>& eta, long max_den,
                            double tol) {
    PeriodData pd;
    pd.S = S;
    pd.eta = eta;
    std::array<Rational, 3> approx{};
    for (int j = 0; j < 3; ++j) {
        const auto r = rationalize(eta[j] / M_PI, max_den, tol);
        if (!r) return pd;
        approx[j] = *r;
    }
    // Smallest n with n * eta_j in 2 pi Z for all j: n p_j / q_j even integer.
    long n = 1;
    for (int j = 0; j < 3; ++j) {
        const long q2 = 2 * approx[j].q;
        const long nj = q2 / gcd_l(approx[j].p, q2);
        n = lcm_l(n, nj);
    }
    pd.rational_approx = approx;
    pd.torus_multiple = n;
    return pd;
}

std::string to_string(SearchCase c) {
    switch (c) {
        case SearchCase::case_a: return "a";
        case SearchCase::case_b: return "b";
        case SearchCase::case_c: return "c";
        case SearchCase::generic: return "generic";
    }
    return "generic";
}

std::vector<TorusCandidate> torus_search(const TorusSearchConfig& config) {
    std::vector<TorusCandidate> out;

    // Outer parameter rows: (theta, B) pairs determined by the case.
    std::vector<std::pair<double, double>> rows;
    switch (config.search_case) {
        case SearchCase::case_a:
            rows.push_back({config.theta, config.B == 0 ? -1.0 : config.B});
            break;
        case SearchCase::case_b: {
            const std::vector<double> thetas = config.theta_values.empty()
                                                   ? std::vector<double>{config.theta}
                                                   : config.theta_values;
            for (double th : thetas) rows.push_back({th, 0.0});
            break;
        }
        case SearchCase::case_c:
            rows.push_back({config.theta, config.B});
            break;
        case SearchCase::generic: {
            const std::vector<double> thetas = config.theta_values.empty()
                                                   ? std::vector<double>{config.theta}
                                                   : config.theta_values;
            const std::vector<double> bs = config.B_values.empty()
                                               ? std::vector<double>{config.B}
                                               : config.B_values;
            for (double th : thetas)
                for (double b : bs) rows.push_back({th, b});
            break;
        }
    }

    const long n_sweep =
        long(std::floor((config.sweep_hi - config.sweep_lo) / config.sweep_step)) + 1;

    std::mutex out_mutex;
    long row_index = 0;
    for (const auto& [theta, B] : rows) {
        const ConeParams base = derive_params(theta, std::clamp(B, -1.0, 1.0), 0.0);
        const YRowData yrow = y_row_data(base, config.search_case, config.max_den, config.tol);
        if (!yrow.ok) {
            ++row_index;
            continue;
        }

        // Sweep C; cache the driver phase per grid point, then scan intervals
        // for driver-rational crossings.
        const int driver = 0;
        std::vector<ZDriverData> zd(static_cast<std::size_t>(n_sweep));
        parallel_for(std::size_t(n_sweep), [&](std::size_t i) {
            const double C = config.sweep_lo + double(i) * config.sweep_step;
            if (std::abs(C) >= 1.0 - 1e-12) return;
            zd[i] = z_phase_driver(base, C, driver);
        });

        std::vector<double> accepted_c;
        for (long i = 0; i + 1 < n_sweep; ++i) {
            if (!zd[i].ok || !zd[i + 1].ok) continue;
            const double c0 = config.sweep_lo + double(i) * config.sweep_step;
            const double c1 = c0 + config.sweep_step;
            const double f0 = zd[i].zeta / M_PI;
            const double f1 = zd[i + 1].zeta / M_PI;
            // A jump across one sweep step means the phase is not resolved
            // (period divergence nearby); refinement would chase noise.
            if (std::abs(f1 - f0) > 0.2) continue;
            for (const Rational& target : rationals_in_range(f0, f1, config.max_den)) {
                const auto cstar =
                    refine_driver(base, driver, target.value(), c0, f0, c1, f1);
                if (!cstar) continue;
                bool seen = false;
                for (double c_prev : accepted_c)
                    if (std::abs(c_prev - *cstar) < 1e-9) seen = true;
                if (seen) continue;
                const ZPhaseData d = z_phase_data(base, *cstar);
                if (!d.ok) continue;
                PeriodData zdata = make_period_data(d.T, d.zeta, config.max_den, config.tol);
                if (!zdata.torus_multiple) continue;
                // Verification over the full claimed period must stay
                // affordable; extreme multiples are dropped, not reported.
                const double full_y =
                    yrow.data.S * double(yrow.data.torus_multiple.value_or(1));
                const double full_z = d.T * double(*zdata.torus_multiple);
                if (full_y > config.max_verify_span || full_z > config.max_verify_span)
                    continue;
                accepted_c.push_back(*cstar);

                TorusCandidate cand;
                cand.search_case = config.search_case;
                cand.theta = theta;
                cand.B = B;
                cand.C = *cstar;
                cand.y_data = yrow.data;
                cand.z_data = zdata;
                cand.lattice = {yrow.data.torus_multiple.value_or(1), 0, 0,
                                zdata.torus_multiple.value_or(1)};
                cand.N = cand.lattice.det_abs();
                cand.sweep_index = row_index * n_sweep + i;
                long qmax = 1;
                for (const auto& r : *zdata.rational_approx) qmax = std::max(qmax, r.q);
                if (yrow.data.rational_approx)
                    for (const auto& r : *yrow.data.rational_approx)
                        qmax = std::max(qmax, r.q);
                cand.max_denominator = qmax;

                const ConeParams full = derive_params(theta, std::clamp(B, -1.0, 1.0), *cstar);
                cand.verify_residual =
                    verify_candidate(full, cand.y_data, cand.z_data, config.integrator_tol);
                if (cand.verify_residual > config.verify_tol) continue;
                const TorusRecord rec =
                    assemble_torus(full, cand.y_data, cand.z_data, cand.lattice);
                cand.area_value = rec.area_value;
                std::lock_guard<std::mutex> lock(out_mutex);
                out.push_back(cand);
            }
        }
        ++row_index;
    }

    std::sort(out.begin(), out.end(), [](const TorusCandidate& a, const TorusCandidate& b) {
        if (a.max_denominator != b.max_denominator) return a.max_denominator < b.max_denominator;
        return a.sweep_index < b.sweep_index;
    });
    // Drop duplicate refinements of the same root from adjacent intervals.
    std::vector<TorusCandidate> dedup;
    for (const auto& c : out) {
        bool seen = false;
        for (const auto& k : dedup)
            if (std::abs(k.C - c.C) < 1e-9 && std::abs(k.theta - c.theta) < 1e-12
                && std::abs(k.B - c.B) < 1e-12)
                seen = true;
        if (!seen) dedup.push_back(c);
    }
    return dedup;
}

TorusRecord assemble_torus(const ConeParams& params, const PeriodData& y_data,
                           const PeriodData& z_data, const Lattice2& lattice) {
    if (lattice.det_abs() == 0)
        throw degenerate_lattice_error("assemble_torus: degenerate lattice");
    TorusRecord rec;
    const double S = y_data.S, T = z_data.S;

    const bool y_const = std::abs(std::abs(params.B) - 1.0) < 1e-12;
    const bool z_const = std::abs(std::abs(params.C) - 1.0) < 1e-12;
    const EllipticForm yform =
        y_const ? EllipticForm{} : potential_closed_form(params.beta_coeffs(), params.B);
    const EllipticForm zform =
        z_const ? EllipticForm{} : potential_closed_form(params.gamma_coeffs(), params.C);
    const auto vfn = [&](double s) { return y_const ? 0.0 : yform.value(s); };
    const auto wfn = [&](double t) { return z_const ? 0.0 : zform.value(t); };

    const double int_v = adaptive_simpson(vfn, 0.0, S, 1e-11);
    const double int_w = adaptive_simpson(wfn, 0.0, T, 1e-11);
    rec.area_value = area_formula(params, S, T, lattice, int_v, int_w);

    // Direct 2-D quadrature of the area form over the fundamental domain.
    const double SN = S * double(std::abs(lattice.a11));
    const double TN = T * double(std::abs(lattice.a22));
    rec.area_quadrature = adaptive_simpson(
        [&](double s) {
            return adaptive_simpson(
                [&](double t) {
                    return 2.0 * (params.a + params.b * vfn(s) + params.c * wfn(t));
                },
                0.0, TN, 1e-10);
        },
        0.0, SN, 1e-8);
    rec.candidate.y_data = y_data;
    rec.candidate.z_data = z_data;
    rec.candidate.lattice = lattice;
    rec.candidate.N = lattice.det_abs();
    rec.candidate.theta = params.theta;
    rec.candidate.B = params.B;
    rec.candidate.C = params.C;
    return rec;
}

} // namespace slc
