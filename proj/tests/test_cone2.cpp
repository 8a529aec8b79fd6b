#include <doctest.h>

#include <cmath>
#include <random>

#include "slcone/cone2.hpp"
#include "slcone/elliptic.hpp"
#include "slcone/periodicity.hpp"

using namespace slc;

TEST_CASE("normalized coefficients at theta = 0") {
    const ConeParams p = derive_params(0.0, 0.3, 0.5);
    const double r2 = 1.0 / std::sqrt(2.0), r6 = 1.0 / std::sqrt(6.0);
    CHECK(p.beta[0] == doctest::Approx(r2).epsilon(1e-15));
    CHECK(p.beta[1] == doctest::Approx(-r2).epsilon(1e-15));
    CHECK(p.beta[2] == doctest::Approx(0.0));
    CHECK(p.gamma[0] == doctest::Approx(-r6).epsilon(1e-15));
    CHECK(p.gamma[1] == doctest::Approx(-r6).epsilon(1e-15));
    CHECK(p.gamma[2] == doctest::Approx(2 * r6).epsilon(1e-15));
    CHECK(p.a == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(p.b == doctest::Approx(0.0));
    CHECK(p.c == doctest::Approx(-1.0 / (6.0 * std::sqrt(6.0))).epsilon(1e-14));
    CHECK(p.xi.real() == doctest::Approx(-0.5 / (6.0 * std::sqrt(6.0))).epsilon(1e-14));
    CHECK(p.xi.imag() == doctest::Approx(0.0));
}

TEST_CASE("parameter identities across the angle family") {
    for (double theta : {0.0, 0.4, 1.0, 2.2, 3.9, 5.5}) {
        const ConeParams p = derive_params(theta, 0.3, 0.4);
        CHECK(std::abs(p.beta[0] + p.beta[1] + p.beta[2]) < 1e-12);
        CHECK(std::abs(p.gamma[0] + p.gamma[1] + p.gamma[2]) < 1e-12);
        double bg = 0, b2 = 0, g2 = 0;
        for (int j = 0; j < 3; ++j) {
            bg += p.beta[j] * p.gamma[j];
            b2 += p.beta[j] * p.beta[j];
            g2 += p.gamma[j] * p.gamma[j];
        }
        CHECK(std::abs(bg) < 1e-12);
        CHECK(b2 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g2 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.a == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
        CHECK(p.b * p.b + p.c * p.c == doctest::Approx(1.0 / 216.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)derive_params(0.0, 1.5, 0.0), invalid_level_error);
}

TEST_CASE("immersion basics: vertex, unit norm, cone scaling") {
    const ConeParams p = derive_params(1.0, -1.0, -1.0);
    const ConeStrands strands = integrate_cone_strands(p, 0, 1, 0, 1, 1e-12);
    const ComplexTriple vertex = immersion(p, strands, 0.0, 0.3, 0.7);
    CHECK(max_abs(vertex) == 0.0);
    const ComplexTriple unit = immersion(p, strands, 1.0, 0.0, 0.0);
    CHECK(norm_sq(unit) == doctest::Approx(1.0).epsilon(1e-12));
    const ComplexTriple twice = immersion(p, strands, 2.0, 0.4, 0.6);
    const ComplexTriple once = immersion(p, strands, 1.0, 0.4, 0.6);
    CHECK(max_abs(twice - 2.0 * once) < 1e-14);
}

TEST_CASE("radial tangent equals the unit immersion") {
    const ConeParams p = derive_params(0.7, 0.2, 0.4);
    const ConeStrands strands = integrate_cone_strands(p, 0, 2, 0, 2, 1e-12);
    const TangentFrame fr = tangent_frame(p, strands, 1.7, 0.9, 1.1);
    const ComplexTriple unit = immersion(p, strands, 1.0, 0.9, 1.1);
    CHECK(max_abs(fr.d_r - unit) < 1e-14);
}

TEST_CASE("frame norms match the conformal density") {
    const ConeParams p = derive_params(1.0, 0.3, 0.4);
    const ConeStrands strands = integrate_cone_strands(p, 0, 3, 0, 3, 1e-12);
    for (double s : {0.3, 1.5}) {
        for (double t : {0.2, 2.4}) {
            const double r = 1.3;
            const TangentFrame fr = tangent_frame(p, strands, r, s, t);
            const double f =
                p.a + p.b * strands.y.potential_at(s) + p.c * strands.z.potential_at(t);
            CHECK(norm_sq(fr.d_s) == doctest::Approx(2 * r * r * f).epsilon(1e-9));
            CHECK(norm_sq(fr.d_t) == doctest::Approx(2 * r * r * f).epsilon(1e-9));
            CHECK(norm_sq(fr.d_r) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("finite differences of the immersion match the frame") {
    const ConeParams p = derive_params(2.3, 0.5, -0.3);
    const ConeStrands strands = integrate_cone_strands(p, -1, 3, -1, 3, 1e-12);
    const double r = 1.0, s = 0.8, t = 1.7, h = 1e-5;
    const TangentFrame fr = tangent_frame(p, strands, r, s, t);
    const ComplexTriple fd_s = (1.0 / (2 * h))
                               * (immersion(p, strands, r, s + h, t)
                                  - immersion(p, strands, r, s - h, t));
    const ComplexTriple fd_t = (1.0 / (2 * h))
                               * (immersion(p, strands, r, s, t + h)
                                  - immersion(p, strands, r, s, t - h));
    CHECK(max_abs(fd_s - fr.d_s) < 1e-9);
    CHECK(max_abs(fd_t - fr.d_t) < 1e-9);
}

TEST_CASE("sl verification passes on a generic parameter set") {
    const ConeParams p = derive_params(1.0, 0.3, 0.4);
    const ConeStrands strands = integrate_cone_strands(p, 0, 5, 0, 5, 1e-12);
    GridSpec grid;
    grid.ns = grid.nt = 12;
    grid.s1 = grid.t1 = 5.0;
    const SlReport rep = verify_sl(p, strands, grid, 1e-9);
    CHECK(rep.pass);
    CHECK(rep.worst() < 1e-9);
}

TEST_CASE("sl verification passes in the real evolving-quadrics case") {
    const ConeParams p = derive_params(1.0, 0.0, 0.0);
    const ConeStrands strands = integrate_cone_strands(p, 0, 5, 0, 5, 1e-12);
    GridSpec grid;
    grid.ns = grid.nt = 10;
    grid.s1 = grid.t1 = 5.0;
    const SlReport rep = verify_sl(p, strands, grid, 1e-10);
    CHECK(rep.im_omega_max < 1e-10);
    CHECK(rep.pass);
}

TEST_CASE("a corrupted coefficient pair breaks the omega_st identity") {
    // gamma . beta != 0 makes the mixed Kaehler pairing proportional to the
    // violation; every residual the corruption does not touch stays small.
    ConeParams p = derive_params(1.0, 0.3, 0.4);
    const double eps = 1e-3;
    for (int j = 0; j < 3; ++j) p.gamma[j] += eps * p.beta[j];
    // Re-orthonormalize the sum constraint only (keeps the strands valid).
    const ConeStrands strands = integrate_cone_strands(p, 0, 3, 0, 3, 1e-12);
    GridSpec grid;
    grid.ns = grid.nt = 8;
    grid.s1 = grid.t1 = 3.0;
    const SlReport rep = verify_sl(p, strands, grid, 1e-9);
    CHECK_FALSE(rep.pass);
    CHECK(rep.omega_st_max > 1e-5);
}

TEST_CASE("classification precedence") {
    CHECK(classify_case(derive_params(1.0, -1.0, 0.3)) == CaseLabel::u1_invariant_a);
    CHECK(classify_case(derive_params(1.0, 0.0, 0.4)) == CaseLabel::evolving_quadrics_b);
    CHECK(classify_case(derive_params(0.0, 0.3, 0.4)) == CaseLabel::reduced_c);
    CHECK(classify_case(derive_params(1.0, 0.3, 0.4)) == CaseLabel::generic);
    // Precedence: (a) wins over (b) wins over (c).
    CHECK(classify_case(derive_params(0.0, 1.0, 0.0)) == CaseLabel::u1_invariant_a);
    CHECK(classify_case(derive_params(0.0, 0.0, 0.4)) == CaseLabel::evolving_quadrics_b);
}

TEST_CASE("rescaling the coefficients reparametrizes the immersion") {
    const ConeParams p = derive_params(1.0, 0.3, 0.4);
    const double sigma = 1.7;
    const StrandCoefficients scaled{sigma * p.beta[0], sigma * p.beta[1], sigma * p.beta[2],
                                    true};
    const Trajectory base =
        integrate_strand(p.beta_coeffs(), initial_state(p.beta_coeffs(), 0.3), 0, 8, 1e-12);
    const Trajectory fast = integrate_strand(scaled, initial_state(scaled, 0.3), 0, 5, 1e-12);
    for (double s = 0; s <= 4.0; s += 0.37) {
        const StrandState a = fast.at(s);
        const StrandState b = base.at(sigma * s);
        CHECK(max_abs(a.y - b.y) < 1e-8);
        CHECK(a.v == doctest::Approx(b.v / sigma).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("real family sweeps quadric cones") {
    // With both levels zero the strands are real: the y point moves on the
    // curve {sum x^2 = 3, sum gamma_j x_j^2 = 0} and each fixed-t slice of
    // the image is a quadric cone in a Lagrangian 3-plane.
    const ConeParams p = derive_params(1.0, 0.0, 0.0);
    const ConeStrands strands = integrate_cone_strands(p, 0, 6, 0, 6, 1e-12);
    double curve_worst = 0, member_worst = 0;
    for (double s = 0; s <= 6.0; s += 0.11) {
        const ComplexTriple y = strands.y.at(s).y;
        double sum2 = 0, quad = 0;
        for (int j = 0; j < 3; ++j) {
            sum2 += std::norm(y[j]);
            quad += p.gamma[j] * (y[j] * y[j]).real();
        }
        curve_worst = std::max({curve_worst, std::abs(sum2 - 3.0), std::abs(quad)});
    }
    for (double t : {0.4, 2.3}) {
        const StrandState zs = strands.z.at(t);
        for (double s = 0; s <= 6.0; s += 0.37) {
            const ComplexTriple pt = immersion(p, strands, 1.0, s, t);
            // Scaled fixed-t membership: sum_j gamma_j P_j^2 / z_j(t)^2.
            Complex member = 0;
            for (int j = 0; j < 3; ++j)
                member += p.gamma[j] * pt[j] * pt[j] / (zs.y[j] * zs.y[j]);
            member_worst = std::max(member_worst, std::abs(member));
        }
    }
    CHECK(curve_worst < 1e-9);
    CHECK(member_worst < 1e-6);
}

TEST_CASE("area reduces to S T / 3 for constant potentials") {
    const ConeParams p = derive_params(1.0, 1.0, -1.0);
    const ConeStrands strands = integrate_cone_strands(p, 0, 7, 0, 7, 1e-12);
    const double S = 2.0, T = 3.0;
    CHECK(area(p, S, T, {1, 0, 0, 1}, strands) == doctest::Approx(S * T / 3.0).epsilon(1e-12));
    CHECK(area(p, S, T, {2, 0, 0, 1}, strands)
          == doctest::Approx(2 * S * T / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)area(p, S, T, {1, 1, 1, 1}, strands), degenerate_lattice_error);
}

TEST_CASE("area formula matches direct quadrature of the frame area form") {
    const ConeParams p = derive_params(1.0, 0.3, 0.4);
    const PeriodResult sp = strand_period(p.beta_coeffs(), 0.3);
    const PeriodResult tp = strand_period(p.gamma_coeffs(), 0.4);
    REQUIRE(sp.kind == PeriodResult::Kind::periodic);
    REQUIRE(tp.kind == PeriodResult::Kind::periodic);
    const ConeStrands strands = integrate_cone_strands(p, 0, sp.S, 0, tp.S, 1e-12);
    const double direct = area(p, sp.S, tp.S, {1, 0, 0, 1}, strands);

    // Oracle: tensor quadrature of sqrt(det g) from the actual frame.
    const int n = 160;
    double acc = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double s = sp.S * (i + 0.5) / n;
            const double t = tp.S * (j + 0.5) / n;
            const TangentFrame fr = tangent_frame(p, strands, 1.0, s, t);
            const double gss = norm_sq(fr.d_s), gtt = norm_sq(fr.d_t);
            const double gst = metric(fr.d_s, fr.d_t);
            acc += std::sqrt(std::max(0.0, gss * gtt - gst * gst));
        }
    acc *= sp.S * tp.S / double(n) / double(n);
    CHECK(direct == doctest::Approx(acc).epsilon(1e-6));
}

TEST_CASE("parameter identities under random angles and levels") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI), lev(-1.0, 1.0);
    for (int it = 0; it < 60; ++it) {
        const ConeParams p = derive_params(ang(rng), lev(rng), lev(rng));
        CHECK(p.a == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
        CHECK(p.b * p.b + p.c * p.c == doctest::Approx(1.0 / 216.0).epsilon(1e-12));
        CHECK(std::abs(p.beta[0] * p.gamma[0] + p.beta[1] * p.gamma[1]
                       + p.beta[2] * p.gamma[2])
              < 1e-12);
        // The derived scalars agree with their power-sum forms.
        double b3 = 0, c3 = 0, b2g = 0;
        for (int j = 0; j < 3; ++j) {
            b3 += p.beta[j] * p.beta[j] * p.beta[j];
            c3 += p.gamma[j] * p.gamma[j] * p.gamma[j];
            b2g += p.beta[j] * p.beta[j] * p.gamma[j];
        }
        CHECK(p.b == doctest::Approx(-b3 / 6.0).epsilon(1e-11).scale(1.0));
        CHECK(p.c == doctest::Approx(-c3 / 6.0).epsilon(1e-11).scale(1.0));
        CHECK(p.c == doctest::Approx(b2g / 6.0).epsilon(1e-11).scale(1.0));
    }
}
