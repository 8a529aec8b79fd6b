#include "slcone/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double polish_root(double a3, double a2, double a1, double a0, double x) {
    // One Newton step; a second if the first moved noticeably.
    for (int it = 0; it < 2; ++it) {
        const double p = ((a3 * x + a2) * x + a1) * x + a0;
        const double dp = (3 * a3 * x + 2 * a2) * x + a1;
        if (dp == 0) break;
        const double step = p / dp;
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

} // namespace

JacobiTriple jacobi_elliptic(double u, double m) {
    if (!(m >= 0.0 && m <= 1.0))
        throw std::domain_error("jacobi_elliptic: parameter m must lie in [0, 1]");
    if (u == 0.0) return {0.0, 1.0, 1.0};
    if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
    if (m == 1.0) {
        const double sech = 1.0 / std::cosh(u);
        return {std::tanh(u), sech, sech};
    }
    // Descending AGM (Abramowitz & Stegun 16.4).
    constexpr int kMax = 32;
    double a[kMax], c[kMax];
    a[0] = 1.0;
    double b = std::sqrt(1.0 - m);
    c[0] = std::sqrt(m);
    int n = 0;
    while (std::abs(c[n]) > 1e-17 * std::abs(a[n]) && n + 1 < kMax) {
        const double an = 0.5 * (a[n] + b);
        const double bn = std::sqrt(a[n] * b);
        c[n + 1] = 0.5 * (a[n] - b);
        a[n + 1] = an;
        b = bn;
        ++n;
    }
    double phi = std::ldexp(a[n] * u, n);
    for (int k = n; k > 0; --k)
        phi = 0.5 * (phi + std::asin(std::clamp(c[k] / a[k] * std::sin(phi), -1.0, 1.0)));
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    const double dn = std::sqrt(std::max(0.0, 1.0 - m * sn * sn));
    return {sn, cn, dn};
}

double carlson_rf(double x, double y, double z) {
    if (x < 0 || y < 0 || z < 0 || (x + y) == 0 || (y + z) == 0 || (x + z) == 0)
        throw std::domain_error("carlson_rf: arguments out of domain");
    for (int it = 0; it < 200; ++it) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        const double mu = (x + y + z) / 3.0;
        const double eps =
            std::max({std::abs(x - mu), std::abs(y - mu), std::abs(z - mu)}) / mu;
        if (eps < 1e-10) {
            const double X = 1.0 - x / mu, Y = 1.0 - y / mu, Z = 1.0 - z / mu;
            const double e2 = X * Y + Y * Z + Z * X;
            const double e3 = X * Y * Z;
            return (1.0 + (e2 * e2 / 24.0 - 0.1 * e3 - e2 / 10.0) + e3 / 14.0) / std::sqrt(mu);
        }
    }
    throw std::runtime_error("carlson_rf: no convergence");
}

double carlson_rc(double x, double y) {
    if (x < 0 || y <= 0) throw std::domain_error("carlson_rc: arguments out of domain");
    constexpr double c1 = 0.3, c2 = 1.0 / 7.0, c3 = 0.375, c4 = 9.0 / 22.0;
    for (int it = 0; it < 200; ++it) {
        const double lam = 2.0 * std::sqrt(x) * std::sqrt(y) + y;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        const double mu = (x + y + y) / 3.0;
        const double s = (y - mu) / mu;
        if (std::abs(s) < 2e-4) {
            return (1.0 + s * s * (c1 + s * (c2 + s * (c3 + s * c4)))) / std::sqrt(mu);
        }
    }
    throw std::runtime_error("carlson_rc: no convergence");
}

double carlson_rj(double x, double y, double z, double p) {
    if (x < 0 || y < 0 || z < 0 || p <= 0 || (x + y) == 0 || (y + z) == 0 || (x + z) == 0)
        throw std::domain_error("carlson_rj: arguments out of domain");
    constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 3.0, c3 = 3.0 / 22.0, c4 = 3.0 / 26.0;
    constexpr double c5 = 0.75 * c3, c6 = 1.5 * c4, c7 = 0.5 * c2, c8 = c3 + c3;
    double sum = 0.0, fac = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lam = sx * (sy + sz) + sy * sz;
        const double alpha = p * (sx + sy + sz) + sx * sy * sz;
        sum += fac * carlson_rc(alpha * alpha, p * (p + lam) * (p + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
        const double mu = 0.2 * (x + y + z + p + p);
        const double eps = std::max({std::abs(1.0 - x / mu), std::abs(1.0 - y / mu),
                                     std::abs(1.0 - z / mu), std::abs(1.0 - p / mu)});
        if (eps < 2e-4) {
            const double dx = (mu - x) / mu, dy = (mu - y) / mu, dz = (mu - z) / mu,
                         dp = (mu - p) / mu;
            const double ea = dx * (dy + dz) + dy * dz;
            const double eb = dx * dy * dz;
            const double ec = dp * dp;
            const double ed = ea - 3.0 * ec;
            const double ee = eb + 2.0 * dp * (ea - ec);
            return 3.0 * sum
                   + fac
                         * (1.0 + ed * (-c1 + c5 * ed - c6 * ee)
                            + eb * (c7 + dp * (-c8 + dp * c4)) + dp * ea * (c2 - dp * c3)
                            - c2 * dp * ec)
                         / (mu * std::sqrt(mu));
        }
    }
    throw std::runtime_error("carlson_rj: no convergence");
}

double complete_elliptic_pi(double n, double m) {
    if (!(m >= 0.0 && m < 1.0))
        throw std::domain_error("complete_elliptic_pi: m must lie in [0, 1)");
    if (!(n < 1.0)) throw std::domain_error("complete_elliptic_pi: n must be < 1");
    return carlson_rf(0.0, 1.0 - m, 1.0) + (n / 3.0) * carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n);
}

double complete_elliptic_k(double m) {
    if (!(m >= 0.0 && m <= 1.0))
        throw std::domain_error("complete_elliptic_k: m must lie in [0, 1]");
    if (m == 1.0) return kInf;
    return carlson_rf(0.0, 1.0 - m, 1.0);
}

double incomplete_elliptic_f(double phi, double m) {
    if (!(m >= 0.0 && m <= 1.0))
        throw std::domain_error("incomplete_elliptic_f: m must lie in [0, 1]");
    if (std::abs(phi) > M_PI_2 + 1e-12)
        throw std::domain_error("incomplete_elliptic_f: |phi| must not exceed pi/2");
    const double s = std::sin(std::clamp(phi, -M_PI_2, M_PI_2));
    const double c2 = 1.0 - s * s;
    return s * carlson_rf(c2, 1.0 - m * s * s, 1.0);
}

int solve_real_cubic(double a3, double a2, double a1, double a0, std::array<double, 3>& roots) {
    if (a3 == 0.0) {
        if (a2 == 0.0) {
            if (a1 == 0.0) return 0;
            roots[0] = -a0 / a1;
            return 1;
        }
        const double disc = a1 * a1 - 4 * a2 * a0;
        if (disc < 0) return 0;
        const double sq = std::sqrt(disc);
        // Numerically stable pair.
        const double q = -0.5 * (a1 + std::copysign(sq, a1));
        double r0 = q / a2;
        double r1 = (q != 0) ? a0 / q : -a1 / a2 - r0;
        if (r0 > r1) std::swap(r0, r1);
        roots[0] = polish_root(0, a2, a1, a0, r0);
        roots[1] = polish_root(0, a2, a1, a0, r1);
        return 2;
    }
    // Depressed cubic t^3 + pt + q with x = t - a2/(3 a3).
    const double inv = 1.0 / a3;
    const double b2 = a2 * inv, b1 = a1 * inv, b0 = a0 * inv;
    const double shift = b2 / 3.0;
    const double p = b1 - b2 * b2 / 3.0;
    const double q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    if (disc >= -1e-13 * std::max({1.0, p * p * p * p, q * q})) {
        // Three real roots (possibly nearly repeated): trigonometric form.
        const double mp3 = std::max(0.0, -p / 3.0);
        const double r = std::sqrt(mp3);
        double cosarg = (r > 0) ? 3.0 * q / (2.0 * p * r) : 0.0;
        cosarg = std::clamp(cosarg, -1.0, 1.0);
        const double theta = std::acos(cosarg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots[k] = 2.0 * r * std::cos(theta - 2.0 * M_PI * k / 3.0) - shift;
        std::sort(roots.begin(), roots.end());
        for (auto& x : roots) x = polish_root(a3, a2, a1, a0, x);
        std::sort(roots.begin(), roots.end());
        return 3;
    }
    // One real root: Cardano.
    const double sq = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    roots[0] = polish_root(a3, a2, a1, a0, u + v - shift);
    return 1;
}

double EllipticForm::value(double s) const {
    if (degree == 0) return 0.0;
    if (homoclinic()) {
        // m == 1: sn = tanh.
        const double t = std::tanh(phase_u0 + freq_k * s);
        return base + span * t * t;
    }
    const JacobiTriple j = jacobi_elliptic(phase_u0 + freq_k * s, modulus_m);
    return base + span * j.sn * j.sn;
}

double EllipticForm::derivative(double s) const {
    if (degree == 0) return 0.0;
    if (homoclinic()) {
        const double u = phase_u0 + freq_k * s;
        const double t = std::tanh(u), sech = 1.0 / std::cosh(u);
        return span * 2.0 * t * sech * sech * freq_k;
    }
    const JacobiTriple j = jacobi_elliptic(phase_u0 + freq_k * s, modulus_m);
    return span * 2.0 * j.sn * j.cn * j.dn * freq_k;
}

EllipticForm potential_closed_form(const StrandCoefficients& coeffs, double B) {
    if (!(std::abs(B) <= 1.0))
        throw invalid_level_error("potential_closed_form: |B| must not exceed 1");
    if (!coeffs.zero_sum && std::abs(coeffs.c1 + coeffs.c2 + coeffs.c3) > 1e-9)
        throw std::invalid_argument("potential_closed_form: coefficients must be zero-sum");

    EllipticForm form;
    form.level_B = B;

    // Q(v) - B^2 = e3 v^3 + e2 v^2 + 0 v + (1 - B^2), e1 = sum = 0.
    const double e3 = coeffs.c1 * coeffs.c2 * coeffs.c3;
    const double e2 =
        coeffs.c1 * coeffs.c2 + coeffs.c2 * coeffs.c3 + coeffs.c3 * coeffs.c1;
    const double one_m_b2 = (1.0 - B) * (1.0 + B);

    if (one_m_b2 == 0.0) {
        form.degree = 0;
        form.roots = {0.0, 0.0, 0.0};
        form.half_period = kInf; // constant solution has no period
        form.branch_sign = +1;
        return form;
    }

    std::array<double, 3> roots{};
    const int n = solve_real_cubic(e3, e2, 0.0, one_m_b2, roots);

    if (std::abs(e3) < 1e-14 || n == 2) {
        // Quadratic degeneration: (v')^2 = 4 e2 (v - r0)(v - r1), e2 < 0.
        form.degree = 2;
        std::array<double, 3> q{};
        const int nq = solve_real_cubic(0.0, e2, 0.0, one_m_b2, q);
        if (nq != 2) throw std::runtime_error("potential_closed_form: quadratic root failure");
        form.roots = {q[0], q[1], kInf};
        form.modulus_m = 0.0;
        form.freq_k = std::sqrt(-e2);
        form.base = q[0];
        form.span = q[1] - q[0];
        form.phase_u0 = std::asin(std::clamp(std::sqrt(-q[0] / form.span), 0.0, 1.0));
        form.half_period = M_PI / (2.0 * form.freq_k); // sn^2 period at m=0 is pi
        form.branch_sign = +1;
        return form;
    }
    if (n != 3)
        throw std::runtime_error("potential_closed_form: expected three real roots");

    form.degree = 3;
    form.roots = roots;
    const double r1 = roots[0], r2 = roots[1], r3 = roots[2];
    double m, k, base, span, sn0sq;
    if (e3 > 0) {
        // Oscillation over [r1, r2] which brackets 0.
        m = (r2 - r1) / (r3 - r1);
        k = std::sqrt(e3 * (r3 - r1));
        base = r1;
        span = r2 - r1;
        sn0sq = -r1 / span;
    } else {
        // Oscillation over [r2, r3].
        m = (r3 - r2) / (r3 - r1);
        k = std::sqrt(-e3 * (r3 - r1));
        base = r3;
        span = -(r3 - r2);
        sn0sq = r3 / (r3 - r2);
    }
    m = std::clamp(m, 0.0, 1.0);
    form.modulus_m = m;
    form.freq_k = k;
    form.base = base;
    form.span = span;
    form.branch_sign = +1;
    const double K = complete_elliptic_k(m);
    form.half_period = K / k;
    const double phi0 = std::asin(std::clamp(std::sqrt(std::clamp(sn0sq, 0.0, 1.0)), 0.0, 1.0));
    if (!std::isfinite(K)) {
        // Homoclinic (double turning root): sn degenerates to tanh. The sign
        // of u0 is fixed by v'(0) = 2 span k tanh(u0) sech^2(u0) >= 0.
        const double sn0 = std::min(std::sqrt(std::clamp(sn0sq, 0.0, 1.0)), 1.0 - 1e-16);
        form.phase_u0 = (span > 0) ? std::atanh(sn0) : -std::atanh(sn0);
        return form;
    }
    const double u0 = incomplete_elliptic_f(phi0, m);
    // v'(0) = span * 2 sn cn dn * k must be >= 0: pick the quarter-period
    // branch accordingly (sn cn > 0 on (0, K), < 0 on (K, 2K)).
    form.phase_u0 = (e3 > 0) ? u0 : 2.0 * K - u0;
    return form;
}

} // namespace slc
