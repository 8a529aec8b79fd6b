#include <doctest.h>

#include <cmath>

#include "slcone/spectral.hpp"

using namespace slc;

namespace {

struct Fixture {
    ConeParams params;
    ConeStrands strands;
    std::vector<std::pair<double, double>> samples;
    explicit Fixture(double theta = 1.0, double B = 0.3, double C = 0.5)
        : params(derive_params(theta, B, C)),
          strands(integrate_cone_strands(params, -0.5, 2.0, -0.5, 2.0, 1e-12)) {
        for (int i = 0; i < 10; ++i) samples.push_back({0.1 + 0.15 * i, 1.6 - 0.14 * i});
    }
};

} // namespace

TEST_CASE("spectral constants are point-independent and match closed forms") {
    const Fixture fx;
    const SpectralConstants sc = spectral_constants(fx.params, fx.samples);
    CHECK(sc.spread_D < 1e-8);
    CHECK(sc.spread_E < 1e-8);
    CHECK(sc.D == doctest::Approx(1.0 / 12.0).epsilon(1e-10));
    CHECK(sc.D == doctest::Approx(spectral_d_closed(fx.params)).epsilon(1e-10));
    CHECK(sc.E == doctest::Approx(spectral_e_closed(fx.params)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("closed-form E at a pinned parameter point") {
    // theta = 0, B = 0, C = 0.5: only the gamma product contributes and
    // |E| = 1/144. The sign follows the characteristic polynomial convention.
    const Fixture fx(0.0, 0.0, 0.5);
    const SpectralConstants sc = spectral_constants(fx.params, fx.samples);
    CHECK(std::abs(sc.E) == doctest::Approx(1.0 / 144.0).epsilon(1e-9));
    CHECK(sc.E == doctest::Approx(spectral_e_closed(fx.params)).epsilon(1e-9));
    CHECK(sc.D == doctest::Approx(1.0 / 12.0).epsilon(1e-10));
}

TEST_CASE("E vanishes for constant potentials") {
    const Fixture fx(1.0, 1.0, -1.0);
    const SpectralConstants sc = spectral_constants(fx.params, fx.samples);
    CHECK(std::abs(sc.E) < 1e-12);
    CHECK(spectral_e_closed(fx.params) == 0.0);
}

TEST_CASE("characteristic polynomial of the killing field") {
    const Fixture fx;
    const SpectralConstants sc = spectral_constants(fx.params, fx.samples);
    const KillingField kf = killing_field(fx.params, 0.7, 1.1);
    for (int k = 0; k < 8; ++k) {
        const Complex lam = std::polar(1.0, 0.25 + 2 * M_PI * k / 8.0);
        CHECK(char_poly_defect(kf, sc.D, sc.E, sc.xi, lam) < 1e-9);
        CHECK(cubic_identity_residual(kf, sc.D, sc.E, sc.xi, lam) < 1e-9);
    }
    // Off the unit circle as well.
    CHECK(char_poly_defect(kf, sc.D, sc.E, sc.xi, std::polar(1.7, 0.4)) < 1e-9);
    // lambda and zeta lambda share the characteristic polynomial.
    const Complex lam = std::polar(1.0, M_PI / 7.0);
    const Complex zl = std::polar(1.0, M_PI / 7.0 + 2 * M_PI / 3.0);
    const CharPoly c1 = char_poly(kf.at_lambda(lam));
    const CharPoly c2 = char_poly(kf.at_lambda(zl));
    CHECK(std::abs(c1.c0 - c2.c0) < 1e-12);
    CHECK(std::abs(c1.c1 - c2.c1) < 1e-12);
}

TEST_CASE("killing eigenvalues are independent of the base point") {
    const Fixture fx;
    const Complex lam = std::polar(1.0, 0.77);
    const KillingField k1 = killing_field(fx.params, 0.2, 0.3);
    const KillingField k2 = killing_field(fx.params, 1.6, 1.9);
    const CharPoly c1 = char_poly(k1.at_lambda(lam));
    const CharPoly c2 = char_poly(k2.at_lambda(lam));
    CHECK(std::abs(c1.c0 - c2.c0) < 1e-8);
    CHECK(std::abs(c1.c1 - c2.c1) < 1e-8);
    CHECK(std::abs(c1.c2 - c2.c2) < 1e-8);
}

TEST_CASE("complex cubic solver with back-substitution") {
    const Complex a2(0.3, -1.1), a1(-0.7, 0.2), a0(1.9, 0.8);
    const auto roots = solve_cubic_complex(a2, a1, a0);
    for (const Complex& x : roots) {
        const Complex val = ((x + a2) * x + a1) * x + a0;
        CHECK(std::abs(val) < 1e-12);
    }
    // Distinct roots for this generic polynomial.
    CHECK(std::abs(roots[0] - roots[1]) > 1e-6);
    CHECK(std::abs(roots[1] - roots[2]) > 1e-6);
}

TEST_CASE("curve samples satisfy the defining cubic") {
    const Fixture fx;
    const SpectralConstants sc = spectral_constants(fx.params, fx.samples);
    for (int power : {2, 6}) {
        const auto samples =
            curve_samples(sc.D, sc.E, sc.xi, default_lambda_grid(64, 2, 4), power);
        for (const auto& s : samples) CHECK(s.back_substitution_residual < 1e-12);
    }
}

TEST_CASE("curve involutions close the root multisets") {
    const Fixture fx;
    const SpectralConstants sc = spectral_constants(fx.params, fx.samples);
    const auto grid = default_lambda_grid(128, 4, 6);
    for (int power : {2, 6}) {
        const InvolutionResiduals inv = involution_residuals(sc.D, sc.E, sc.xi, grid, power);
        CHECK(inv.rho < 1e-9);
        CHECK(inv.sigma < 1e-9);
    }
}

TEST_CASE("the two curve models correspond under lambda cubing") {
    const Fixture fx;
    const SpectralConstants sc = spectral_constants(fx.params, fx.samples);
    for (double ang : {0.3, 1.9, 4.4}) {
        const Complex lam = std::polar(1.1, ang);
        const CurveSample x_model = curve_sample(sc.D, sc.E, sc.xi, lam * lam * lam, 2);
        const CurveSample y_model = curve_sample(sc.D, sc.E, sc.xi, lam, 6);
        CHECK(multiset_distance(x_model.mu, y_model.mu) < 1e-10);
    }
}

TEST_CASE("constancy violation raises") {
    // Tampered scalars make the pointwise constants drift.
    Fixture fx;
    fx.params.b *= 1.05;
    CHECK_THROWS_AS((void)spectral_constants(fx.params, fx.samples),
                    constancy_violation_error);
}

TEST_CASE("cubic identity residual is invariant under the cube-root action") {
    const Fixture fx;
    const SpectralConstants sc = spectral_constants(fx.params, fx.samples);
    const KillingField kf = killing_field(fx.params, 0.7, 1.1);
    const Complex zeta = std::polar(1.0, 2 * M_PI / 3.0);
    for (double ang : {0.3, 1.4}) {
        const Complex lam = std::polar(1.0, ang);
        const double a0 = cubic_identity_residual(kf, sc.D, sc.E, sc.xi, lam);
        const double a1 = cubic_identity_residual(kf, sc.D, sc.E, sc.xi, zeta * lam);
        CHECK(std::abs(a0 - a1) < 1e-12);
    }
}

TEST_CASE("curve sample at a real-coefficient parameter point") {
    // Constant potentials with a reduced angle give E = 0 and real xi; the
    // lambda = i sample is then fully explicit and the roots must satisfy
    // the cubic to machine precision.
    const ConeParams p = derive_params(0.0, 1.0, -1.0);
    CHECK(std::abs(p.xi.imag()) < 1e-15);
    CHECK(spectral_e_closed(p) == 0.0);
    const CurveSample cs = curve_sample(spectral_d_closed(p), 0.0, p.xi, Complex(0, 1), 2);
    CHECK(cs.back_substitution_residual < 1e-12);
    const CurveSample cs6 = curve_sample(spectral_d_closed(p), 0.0, p.xi, Complex(0, 1), 6);
    CHECK(cs6.back_substitution_residual < 1e-12);
}
