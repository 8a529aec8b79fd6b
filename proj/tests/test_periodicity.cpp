#include <doctest.h>

#include <cmath>

#include "slcone/periodicity.hpp"

using namespace slc;

TEST_CASE("rationalize basics") {
    const auto half = rationalize(0.5, 10, 1e-9);
    REQUIRE(half.has_value());
    CHECK(half->p == 1);
    CHECK(half->q == 2);

    const auto third = rationalize(1.0 / 3.0 + 1e-12, 100, 1e-9);
    REQUIRE(third.has_value());
    CHECK(third->p == 1);
    CHECK(third->q == 3);

    CHECK_FALSE(rationalize(std::sqrt(2.0), 50, 1e-9).has_value());

    const auto neg = rationalize(-0.75, 16, 1e-9);
    REQUIRE(neg.has_value());
    CHECK(neg->p == -3);
    CHECK(neg->q == 4);

    const auto zero = rationalize(1e-13, 40, 1e-9);
    REQUIRE(zero.has_value());
    CHECK(zero->p == 0);
    CHECK(zero->q == 1);
}

TEST_CASE("rationalize is monotone in tolerance") {
    const double x = 0.3183098861; // near 1/pi
    const auto loose = rationalize(x, 40, 1e-3);
    const auto tight = rationalize(x, 40, 1e-12);
    REQUIRE(loose.has_value());
    CHECK_FALSE(tight.has_value());
    // Shrinking tol never produces a different convergent, only absence.
    const auto mid = rationalize(x, 40, 1e-4);
    if (mid) {
        CHECK(mid->p == loose->p);
        CHECK(mid->q == loose->q);
    }
}

TEST_CASE("strand period: the two methods agree") {
    const ConeParams p = derive_params(1.0, 0.0, 0.0);
    const PeriodResult res = strand_period(p.beta_coeffs(), 0.0, 1e-12);
    REQUIRE(res.kind == PeriodResult::Kind::periodic);
    CHECK(res.S == doctest::Approx(res.S_event).epsilon(1e-8));

    const PeriodResult gen = strand_period(p.beta_coeffs(), 0.45, 1e-12);
    REQUIRE(gen.kind == PeriodResult::Kind::periodic);
    CHECK(gen.S == doctest::Approx(gen.S_event).epsilon(1e-8));
}

TEST_CASE("strand period signals the degenerate levels") {
    const ConeParams p = derive_params(1.0, 0.0, 0.0);
    CHECK(strand_period(p.beta_coeffs(), 1.0).kind == PeriodResult::Kind::constant_potential);
    // Repeated gamma components at theta = 0 with level 0: homoclinic.
    const ConeParams p0 = derive_params(0.0, 0.0, 0.0);
    CHECK(strand_period(p0.gamma_coeffs(), 0.0).kind == PeriodResult::Kind::homoclinic);
}

TEST_CASE("quadratic degeneration period is pi sqrt 2") {
    const ConeParams p = derive_params(0.0, 0.3, 0.0);
    const PeriodResult res = strand_period(p.beta_coeffs(), 0.3, 1e-12);
    REQUIRE(res.kind == PeriodResult::Kind::periodic);
    CHECK(res.S == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(res.S_event == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("rotation phases sum to zero and match the strand") {
    const ConeParams p = derive_params(1.0, 0.3, 0.0);
    const PeriodResult pr = strand_period(p.beta_coeffs(), 0.3, 1e-12);
    const auto eta = rotation_phases(p.beta_coeffs(), 0.3, pr.S);
    CHECK(std::abs(eta[0] + eta[1] + eta[2]) < 1e-9);

    const Trajectory traj = integrate_strand(p.beta_coeffs(), initial_state(p.beta_coeffs(), 0.3),
                                             0.0, 3 * pr.S, 1e-12);
    for (double s0 : {0.0, 0.9, 2.2}) {
        const StrandState a = traj.at(s0);
        const StrandState b = traj.at(s0 + pr.S);
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(b.y[j] - std::polar(1.0, eta[j]) * a.y[j]) < 1e-8);
    }
}

TEST_CASE("rotation phases vanish at level zero") {
    const ConeParams p = derive_params(1.3, 0.0, 0.0);
    const PeriodResult pr = strand_period(p.beta_coeffs(), 0.0, 1e-12);
    const auto eta = rotation_phases(p.beta_coeffs(), 0.0, pr.S);
    for (double e : eta) CHECK(e == 0.0);
}

TEST_CASE("level-zero strands flip sign across one potential period") {
    // The polar phases are constant, but the two components whose norms
    // vanish at the turning points cross zero once per period: the strand
    // itself is periodic with twice the potential period.
    const ConeParams p = derive_params(1.3, 0.0, 0.0);
    const StrandCoefficients bc = p.beta_coeffs();
    const PeriodResult pr = strand_period(bc, 0.0, 1e-12);
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.0), 0.0, 2.5 * pr.S, 1e-12);
    int flipped = 0;
    for (int j = 0; j < 3; ++j) {
        const Complex a = traj.at(0.3).y[j];
        const Complex b = traj.at(0.3 + pr.S).y[j];
        if (std::abs(b + a) < 1e-8)
            ++flipped;
        else
            CHECK(std::abs(b - a) < 1e-8);
    }
    CHECK(flipped == 2);
    // Full periodicity at 2S.
    for (int j = 0; j < 3; ++j)
        CHECK(std::abs(traj.at(0.3 + 2 * pr.S).y[j] - traj.at(0.3).y[j]) < 1e-8);
}

TEST_CASE("rotation phases for the constant-potential circle solution") {
    const ConeParams p = derive_params(0.9, -1.0, 0.0);
    const double S = 3.7;
    const auto eta = rotation_phases(p.beta_coeffs(), -1.0, S);
    for (int j = 0; j < 3; ++j)
        CHECK(eta[j] == doctest::Approx(p.beta[j] * S).epsilon(1e-12));
}

TEST_CASE("period is gauge independent") {
    // Rotating the initial phases does not change the potential, hence
    // neither the period nor the phase advances.
    const ConeParams p = derive_params(0.9, 0.4, 0.0);
    const StrandCoefficients bc = p.beta_coeffs();
    const PeriodResult pr = strand_period(bc, 0.4, 1e-12);
    const std::array<double, 3> offset = {0.4, -0.25, -0.15};
    const Trajectory rotated =
        integrate_strand(bc, initial_state(bc, 0.4, offset), 0.0, 2.2 * pr.S, 1e-12);
    const auto eta = rotation_phases(bc, 0.4, pr.S);
    for (double s0 : {0.0, 1.1}) {
        const StrandState a = rotated.at(s0);
        const StrandState b = rotated.at(s0 + pr.S);
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(b.y[j] - std::polar(1.0, eta[j]) * a.y[j]) < 1e-9);
    }
}

TEST_CASE("period data multiples") {
    const PeriodData pd = make_period_data(
        2.0, {0.5 * M_PI, -0.25 * M_PI, -0.25 * M_PI}, 40, 1e-9);
    REQUIRE(pd.torus_multiple.has_value());
    // n (1/2) and n (1/4) both even integers: n = 8.
    CHECK(*pd.torus_multiple == 8);
    const PeriodData none = make_period_data(2.0, {std::sqrt(2.0), 0.1, 0.1}, 40, 1e-9);
    CHECK_FALSE(none.torus_multiple.has_value());
}

TEST_CASE("case (a) search finds verified candidates at theta = 0") {
    TorusSearchConfig cfg;
    cfg.search_case = SearchCase::case_a;
    cfg.theta = 0.0;
    cfg.B = -1.0;
    cfg.sweep_lo = 0.3;
    cfg.sweep_hi = 0.9;
    cfg.sweep_step = 2e-3;
    cfg.max_den = 25;
    const auto candidates = torus_search(cfg);
    REQUIRE(candidates.size() >= 2);
    for (const auto& c : candidates) {
        CHECK(c.verify_residual < 1e-6);
        CHECK(c.N >= 1);
        CHECK(c.area_value > 0);
        REQUIRE(c.z_data.rational_approx.has_value());
        for (const auto& r : *c.z_data.rational_approx) CHECK(r.q <= 25);
    }
}

TEST_CASE("assemble torus: formula vs quadrature and lattice doubling") {
    const ConeParams p = derive_params(1.0, 1.0, -1.0);
    PeriodData ydata, zdata;
    ydata.S = 2.0;
    zdata.S = 3.0;
    const TorusRecord rec = assemble_torus(p, ydata, zdata, {1, 0, 0, 1});
    CHECK(rec.area_value == doctest::Approx(2.0 * 3.0 / 3.0).epsilon(1e-12));
    CHECK(rec.area_quadrature == doctest::Approx(rec.area_value).epsilon(1e-8));
    const TorusRecord dbl = assemble_torus(p, ydata, zdata, {2, 0, 0, 1});
    CHECK(dbl.area_value == doctest::Approx(2.0 * rec.area_value).epsilon(1e-12));
    CHECK_THROWS_AS((void)assemble_torus(p, ydata, zdata, {1, 1, 1, 1}),
                    degenerate_lattice_error);
}

TEST_CASE("generic assemble torus matches quadrature") {
    const ConeParams p = derive_params(1.0, 0.3, 0.4);
    const PeriodResult sp = strand_period(p.beta_coeffs(), 0.3);
    const PeriodResult tp = strand_period(p.gamma_coeffs(), 0.4);
    PeriodData ydata, zdata;
    ydata.S = sp.S;
    zdata.S = tp.S;
    const TorusRecord rec = assemble_torus(p, ydata, zdata, {1, 0, 0, 2});
    CHECK(rec.area_quadrature == doctest::Approx(rec.area_value).epsilon(1e-6));
}

TEST_CASE("generic sweep is expected to come out empty") {
    // Four rationality conditions on three parameters: away from the special
    // cases the sweep should find nothing (an empty catalog is valid).
    TorusSearchConfig cfg;
    cfg.search_case = SearchCase::generic;
    cfg.theta_values = {0.7};
    cfg.B_values = {0.25};
    cfg.sweep_lo = -0.5;
    cfg.sweep_hi = 0.5;
    cfg.sweep_step = 2e-3;
    cfg.max_den = 25;
    const auto out = torus_search(cfg);
    MESSAGE("generic candidates found: ", out.size());
    for (const auto& c : out) CHECK(c.verify_residual < 1e-6);
}
