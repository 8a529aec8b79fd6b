#include "slcone/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "slcone/util.hpp"

namespace slc {
namespace {

const Complex kI(0.0, 1.0);

Complex curve_constant_term(double E, Complex xi, Complex lambda, int p) {
    const Complex lp = std::pow(lambda, p);
    return kI * E + kI * xi * xi * lp + kI * std::conj(xi) * std::conj(xi) / lp;
}

} // namespace

double spectral_d_point(const PointData& pd, double r_xi) {
    return pd.f * pd.f + 2.0 * r_xi * r_xi / pd.f + 2.0 * std::norm(pd.g) + 3.0 * pd.h * pd.h;
}

double spectral_e_point(const PointData& pd, double r_xi) {
    const double re_g2 = (pd.g * pd.g).real();
    return -2.0 * pd.f * re_g2 - 2.0 * pd.f * pd.f * pd.h + 2.0 * r_xi * r_xi / pd.f * pd.h
           + 2.0 * std::norm(pd.g) * pd.h + 2.0 * pd.h * pd.h * pd.h;
}

double spectral_d_closed(const ConeParams& p) {
    return p.a * p.a + 2.0 * (p.b * p.b + p.c * p.c) / p.a;
}

double spectral_e_closed(const ConeParams& p) {
    return 2.0 * (p.c * p.c * (1.0 - p.C * p.C) - p.b * p.b * (1.0 - p.B * p.B));
}

SpectralConstants spectral_constants(const ConeParams& params,
                                     const std::vector<std::pair<double, double>>& samples) {
    if (samples.empty())
        throw std::invalid_argument("spectral_constants: no sample points");
    const double r_xi = std::abs(params.xi);
    if (r_xi == 0)
        throw std::domain_error("spectral_constants: isotropic parameters (xi = 0)");
    const ConePotentials pots = cone_potentials(params);
    double dmin = 0, dmax = 0, emin = 0, emax = 0, dsum = 0, esum = 0;
    bool first = true;
    for (const auto& [s, t] : samples) {
        const PointData pd = point_data(params, pots, s, t);
        const double D = spectral_d_point(pd, r_xi);
        const double E = spectral_e_point(pd, r_xi);
        if (first) {
            dmin = dmax = D;
            emin = emax = E;
            first = false;
        } else {
            dmin = std::min(dmin, D);
            dmax = std::max(dmax, D);
            emin = std::min(emin, E);
            emax = std::max(emax, E);
        }
        dsum += D;
        esum += E;
    }
    SpectralConstants sc;
    sc.D = dsum / double(samples.size());
    sc.E = esum / double(samples.size());
    sc.xi = params.xi;
    sc.spread_D = dmax - dmin;
    sc.spread_E = emax - emin;
    if (sc.spread_D > 1e-6 || sc.spread_E > 1e-6)
        throw constancy_violation_error("spectral_constants: sample spread exceeds 1e-6");
    return sc;
}

double char_poly_defect(const KillingField& kf, double D, double E, Complex xi, Complex lambda) {
    const CharPoly cp = char_poly(kf.at_lambda(lambda));
    const Complex expected_c0 = curve_constant_term(E, xi, lambda, 6);
    return std::max({std::abs(cp.c2), std::abs(cp.c1 - D), std::abs(cp.c0 - expected_c0)});
}

double cubic_identity_residual(const KillingField& kf, double D, double E, Complex xi,
                               Complex lambda) {
    const Mat3c t = kf.at_lambda(lambda);
    const Mat3c lhs =
        t * t * t + Complex(D, 0) * t + curve_constant_term(E, xi, lambda, 6) * Mat3c::identity();
    return max_abs(lhs);
}

std::array<Complex, 3> solve_cubic_complex(Complex a2, Complex a1, Complex a0) {
    // Depressed form x = t - a2/3: t^3 + p t + q.
    const Complex shift = a2 / 3.0;
    const Complex p = a1 - a2 * a2 / 3.0;
    const Complex q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const Complex disc = q * q / 4.0 + p * p * p / 27.0;
    Complex u = std::pow(-q / 2.0 + std::sqrt(disc), 1.0 / 3.0);
    if (std::abs(u) < 1e-300) {
        u = std::pow(-q / 2.0 - std::sqrt(disc), 1.0 / 3.0);
        if (std::abs(u) < 1e-300) {
            // p == q == 0: triple root.
            return {-shift, -shift, -shift};
        }
    }
    const Complex omega(-0.5, std::sqrt(3.0) / 2.0);
    std::array<Complex, 3> roots;
    Complex uk = u;
    for (int k = 0; k < 3; ++k) {
        const Complex t = uk - p / (3.0 * uk);
        Complex x = t - shift;
        // Newton polish.
        for (int it = 0; it < 2; ++it) {
            const Complex val = ((x + a2) * x + a1) * x + a0;
            const Complex der = (3.0 * x + 2.0 * a2) * x + a1;
            if (std::abs(der) == 0) break;
            x -= val / der;
        }
        roots[k] = x;
        uk *= omega;
    }
    return roots;
}

CurveSample curve_sample(double D, double E, Complex xi, Complex lambda, int lambda_power) {
    if (lambda == Complex(0, 0))
        throw std::domain_error("curve_sample: lambda must be nonzero");
    CurveSample cs;
    cs.lambda = lambda;
    const Complex c0 = curve_constant_term(E, xi, lambda, lambda_power);
    cs.mu = solve_cubic_complex(0.0, D, c0);
    double worst = 0;
    for (const Complex& mu : cs.mu)
        worst = std::max(worst, std::abs(((mu * mu) + D) * mu + c0));
    cs.back_substitution_residual = worst;
    return cs;
}

std::vector<CurveSample> curve_samples(double D, double E, Complex xi,
                                       const std::vector<Complex>& lambda_grid,
                                       int lambda_power) {
    std::vector<CurveSample> out(lambda_grid.size());
    parallel_for(lambda_grid.size(), [&](std::size_t i) {
        out[i] = curve_sample(D, E, xi, lambda_grid[i], lambda_power);
    });
    return out;
}

double multiset_distance(const std::array<Complex, 3>& u, const std::array<Complex, 3>& v) {
    static constexpr std::array<std::array<int, 3>, 6> kPerms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : kPerms) {
        double worst = 0;
        for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(u[j] - v[p[j]]));
        best = std::min(best, worst);
    }
    return best;
}

InvolutionResiduals involution_residuals(double D, double E, Complex xi,
                                         const std::vector<Complex>& lambda_grid,
                                         int lambda_power) {
    InvolutionResiduals res;
    std::vector<double> rho(lambda_grid.size()), sig(lambda_grid.size());
    parallel_for(lambda_grid.size(), [&](std::size_t i) {
        const Complex lam = lambda_grid[i];
        const CurveSample base = curve_sample(D, E, xi, lam, lambda_power);
        const CurveSample flipped = curve_sample(D, E, xi, -lam, lambda_power);
        rho[i] = multiset_distance(base.mu, flipped.mu);
        const CurveSample mirrored =
            curve_sample(D, E, xi, 1.0 / std::conj(lam), lambda_power);
        std::array<Complex, 3> mapped;
        for (int j = 0; j < 3; ++j) mapped[j] = -std::conj(base.mu[j]);
        sig[i] = multiset_distance(mapped, mirrored.mu);
    });
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        res.rho = std::max(res.rho, rho[i]);
        res.sigma = std::max(res.sigma, sig[i]);
    }
    return res;
}

std::vector<Complex> default_lambda_grid(int n_circle, int n_rays, int per_ray) {
    std::vector<Complex> grid;
    grid.reserve(std::size_t(n_circle) + std::size_t(n_rays) * per_ray);
    for (int k = 0; k < n_circle; ++k)
        grid.push_back(std::polar(1.0, 2.0 * M_PI * double(k) / double(n_circle) + 0.003));
    for (int r = 0; r < n_rays; ++r) {
        const double ang = 2.0 * M_PI * double(r) / double(std::max(1, n_rays)) + 0.1;
        for (int k = 0; k < per_ray; ++k) {
            const double rad = 0.35 + 1.9 * double(k) / double(std::max(1, per_ray - 1));
            grid.push_back(std::polar(rad, ang));
        }
    }
    return grid;
}

} // namespace slc
