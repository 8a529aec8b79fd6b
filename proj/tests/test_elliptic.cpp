#include <doctest.h>

#include <cmath>

#include "slcone/cone2.hpp"
#include "slcone/elliptic.hpp"

using namespace slc;

TEST_CASE("jacobi functions at the origin and parameter endpoints") {
    for (double m : {0.0, 0.4, 1.0}) {
        const JacobiTriple j = jacobi_elliptic(0.0, m);
        CHECK(j.sn == 0.0);
        CHECK(j.cn == 1.0);
        CHECK(j.dn == 1.0);
    }
    const JacobiTriple trig = jacobi_elliptic(1.1, 0.0);
    CHECK(trig.sn == doctest::Approx(std::sin(1.1)).epsilon(1e-14));
    CHECK(trig.cn == doctest::Approx(std::cos(1.1)).epsilon(1e-14));
    CHECK(trig.dn == 1.0);
    const JacobiTriple hyp = jacobi_elliptic(0.8, 1.0);
    CHECK(hyp.sn == doctest::Approx(std::tanh(0.8)).epsilon(1e-14));
    CHECK(hyp.cn == doctest::Approx(1.0 / std::cosh(0.8)).epsilon(1e-14));
    CHECK(hyp.dn == doctest::Approx(1.0 / std::cosh(0.8)).epsilon(1e-14));
    CHECK_THROWS_AS((void)jacobi_elliptic(0.3, -0.1), std::domain_error);
    CHECK_THROWS_AS((void)jacobi_elliptic(0.3, 1.1), std::domain_error);
}

TEST_CASE("jacobi functions against reference values") {
    // Reference values computed with 30-digit arithmetic.
    struct Row {
        double u, m, sn, cn, dn;
    };
    const Row rows[] = {
        {0.7, 0.3, 0.632304776310864517, 0.77471973632692977, 0.938113639681430216},
        {1.9, 0.82, 0.984589353041700669, 0.174882262899715821, 0.452856181164703559},
        {-1.2, 0.5, -0.887715488619278141, 0.460392453527896417, 0.778447561260691555},
        {3.7, 0.05, -0.49418407024171589, -0.869357294050800965, 0.993875799703346505},
        {0.3, 0.999, 0.291316805347295216, 0.956626635068377191, 0.956670990677214934},
    };
    for (const Row& r : rows) {
        const JacobiTriple j = jacobi_elliptic(r.u, r.m);
        CHECK(j.sn == doctest::Approx(r.sn).epsilon(1e-12));
        CHECK(j.cn == doctest::Approx(r.cn).epsilon(1e-12));
        CHECK(j.dn == doctest::Approx(r.dn).epsilon(1e-12));
    }
}

TEST_CASE("jacobi identities hold to 1e-12") {
    for (double m : {0.05, 0.3, 0.77, 0.999}) {
        for (double u = -4.0; u <= 4.0; u += 0.31) {
            const JacobiTriple j = jacobi_elliptic(u, m);
            CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) < 1e-12);
            CHECK(std::abs(j.dn * j.dn + m * j.sn * j.sn - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("complete and incomplete integrals against reference values") {
    CHECK(complete_elliptic_k(0.3) == doctest::Approx(1.71388944817879106).epsilon(1e-12));
    CHECK(complete_elliptic_k(0.9) == doctest::Approx(2.57809211334817329).epsilon(1e-12));
    CHECK(incomplete_elliptic_f(0.6, 0.7)
          == doctest::Approx(0.62623668591439661).epsilon(1e-12));
    CHECK(incomplete_elliptic_f(-1.1, 0.2)
          == doctest::Approx(-1.13780168224144192).epsilon(1e-12));
    CHECK(incomplete_elliptic_f(M_PI_2, 0.3)
          == doctest::Approx(complete_elliptic_k(0.3)).epsilon(1e-12));
}

TEST_CASE("real cubic solver recovers seeded roots") {
    std::array<double, 3> roots{};
    // (x - 1)(x + 2)(x - 0.25) expanded.
    const int n = solve_real_cubic(1.0, 0.75, -2.25, 0.5, roots);
    REQUIRE(n == 3);
    CHECK(roots[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(roots[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(roots[2] == doctest::Approx(1.0).epsilon(1e-12));
    const int nq = solve_real_cubic(0.0, -0.5, 0.0, 0.91, roots);
    REQUIRE(nq == 2);
    CHECK(roots[0] == doctest::Approx(-std::sqrt(1.82)).epsilon(1e-12));
    CHECK(roots[1] == doctest::Approx(std::sqrt(1.82)).epsilon(1e-12));
}

TEST_CASE("constant potential at the level boundary") {
    const ConeParams params = derive_params(1.0, 1.0, 0.0);
    const EllipticForm form = potential_closed_form(params.beta_coeffs(), 1.0);
    CHECK(form.constant());
    CHECK(form.value(3.7) == 0.0);
    CHECK(form.derivative(3.7) == 0.0);
}

TEST_CASE("closed form matches integration for generic parameters") {
    // Also pins the frozen period and modulus for (theta, B) = (1, 0.3).
    const ConeParams params = derive_params(1.0, 0.3, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const EllipticForm form = potential_closed_form(bc, 0.3);
    CHECK(form.degree == 3);
    CHECK(form.modulus_m == doctest::Approx(0.099065069167829139).epsilon(1e-10));
    CHECK(form.period() == doctest::Approx(4.4541754737318678).epsilon(1e-10));
    for (int k = 0; k < 3; ++k) {
        const double q = bc.potential_cubic(form.roots[k]) - 0.3 * 0.3;
        CHECK(std::abs(q) < 1e-10);
    }
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.3), 0.0, 10.0, 1e-12);
    double worst = 0;
    for (double s = 0; s <= 10.0; s += 0.05)
        worst = std::max(worst, std::abs(form.value(s) - traj.potential_at(s)));
    CHECK(worst < 1e-8);
}

TEST_CASE("closed form matches integration in the quadratic degeneration") {
    // theta = 0 removes the cubic term; the potential is a pure sine arch
    // with period pi sqrt(2).
    const ConeParams params = derive_params(0.0, 0.3, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const EllipticForm form = potential_closed_form(bc, 0.3);
    CHECK(form.degree == 2);
    CHECK(form.period() == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-12));
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.3), 0.0, 9.0, 1e-12);
    double worst = 0;
    for (double s = 0; s <= 9.0; s += 0.03)
        worst = std::max(worst, std::abs(form.value(s) - traj.potential_at(s)));
    CHECK(worst < 1e-8);
}

TEST_CASE("closed form tracks both oscillation branches") {
    // e3 of the gamma triple at theta = 0 is positive, the beta case above is
    // negative; both orientations must reproduce the integrated potential.
    const ConeParams params = derive_params(0.0, 0.0, 0.45);
    const StrandCoefficients gc = params.gamma_coeffs();
    const EllipticForm form = potential_closed_form(gc, 0.45);
    const Trajectory traj = integrate_strand(gc, initial_state(gc, 0.45), 0.0, 12.0, 1e-12);
    double worst = 0;
    for (double t = 0; t <= 12.0; t += 0.04)
        worst = std::max(worst, std::abs(form.value(t) - traj.potential_at(t)));
    CHECK(worst < 1e-8);
}

TEST_CASE("homoclinic double-root potential is flagged and still accurate") {
    // Repeated gamma components with level zero: the turning root is double
    // and the potential approaches it without returning.
    const ConeParams params = derive_params(0.0, 0.0, 0.0);
    const StrandCoefficients gc = params.gamma_coeffs();
    const EllipticForm form = potential_closed_form(gc, 0.0);
    CHECK(form.homoclinic());
    const Trajectory traj = integrate_strand(gc, initial_state(gc, 0.0), 0.0, 8.0, 1e-12);
    double worst = 0;
    for (double t = 0; t <= 8.0; t += 0.05)
        worst = std::max(worst, std::abs(form.value(t) - traj.potential_at(t)));
    CHECK(worst < 1e-7);
}

TEST_CASE("derivative of the closed form matches the defining equation") {
    const ConeParams params = derive_params(2.0, 0.6, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const EllipticForm form = potential_closed_form(bc, 0.6);
    for (double s = 0; s <= 6.0; s += 0.11) {
        const double v = form.value(s);
        const double dv = form.derivative(s);
        const double rhs = 4.0 * (bc.potential_cubic(v) - 0.36);
        CHECK(dv * dv == doctest::Approx(rhs).epsilon(1e-7).scale(1.0));
    }
    CHECK(form.derivative(0.0) == doctest::Approx(2.0 * std::sqrt(1 - 0.36)).epsilon(1e-9));
}
