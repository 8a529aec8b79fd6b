#include <doctest.h>

#include <cmath>
#include <sstream>

#include "slcone/cone2.hpp"
#include "slcone/strand.hpp"

using namespace slc;

TEST_CASE("strand derivative by direct substitution") {
    const StrandCoefficients coeffs{1, -1, 0, true};
    StrandState st;
    st.y = {1, 1, 1};
    st.v = 0;
    const StrandDerivative d = strand_derivative(coeffs, st);
    CHECK(d.dy.z1 == Complex(1, 0));
    CHECK(d.dy.z2 == Complex(-1, 0));
    CHECK(d.dy.z3 == Complex(0, 0));
    CHECK(d.dv == doctest::Approx(2.0));
}

TEST_CASE("strand derivative vanishes against a zero component") {
    const StrandCoefficients coeffs{0.4, 0.7, -0.2};
    StrandState st;
    st.y = {Complex(1, 0.5), Complex(-0.3, 1), Complex(0, 0)};
    const StrandDerivative d = strand_derivative(coeffs, st);
    CHECK(std::abs(d.dy.z1) == 0.0);
    CHECK(std::abs(d.dy.z2) == 0.0);
}

TEST_CASE("phase-circle solution has constant potential") {
    // y_j = e^{i(b_j s + k_j)} with k1+k2+k3 = -pi/2 solves the system with
    // v identically zero, level -1.
    const ConeParams params = derive_params(1.234, -1.0, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const StrandState st = initial_state(bc, -1.0);
    CHECK(st.y.z3.imag() == doctest::Approx(-1.0)); // phases (0, 0, -pi/2)
    const StrandDerivative d = strand_derivative(bc, st);
    CHECK(d.dv == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("initial state levels and norms") {
    const StrandCoefficients coeffs{1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0.0, true};
    for (double B : {0.0, 0.5, -1.0, 0.99}) {
        const StrandState st = initial_state(coeffs, B);
        CHECK(conserved_level(st) == doctest::Approx(B).epsilon(1e-14));
        for (int j = 0; j < 3; ++j) CHECK(std::abs(st.y[j]) == doctest::Approx(1.0));
        const Complex prod = st.y.z1 * st.y.z2 * st.y.z3;
        CHECK(prod.real() >= 0.0);
    }
    CHECK(initial_state(coeffs, 0.0).y.z1 == Complex(1, 0));
    CHECK_THROWS_AS((void)initial_state(coeffs, 1.5), invalid_level_error);
}

TEST_CASE("closed-form circle strand reproduced over a long span") {
    const ConeParams params = derive_params(0.77, -1.0, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory traj = integrate_strand(bc, initial_state(bc, -1.0), 0.0, 10.0, 1e-12);
    for (double s : {0.5, 3.3, 7.9, 10.0}) {
        const StrandState st = traj.at(s);
        for (int j = 0; j < 3; ++j) {
            const double phase = params.beta[j] * s + (j == 2 ? -M_PI_2 : 0.0);
            CHECK(std::abs(st.y[j] - std::polar(1.0, phase)) < 1e-8);
        }
        CHECK(std::abs(st.v) < 1e-9);
    }
}

TEST_CASE("zero level keeps the strand real") {
    const ConeParams params = derive_params(1.0, 0.0, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.0), 0.0, 20.0, 1e-12);
    for (double s = 0; s <= 20.0; s += 0.37) {
        const StrandState st = traj.at(s);
        for (int j = 0; j < 3; ++j) CHECK(std::abs(st.y[j].imag()) < 1e-10);
    }
}

TEST_CASE("conservation and constraint drift within 100x tolerance") {
    const ConeParams params = derive_params(1.0, 0.3, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const double tol = 1e-10;
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.3), 0.0, 50.0, tol);
    CHECK(traj.conservation_drift() < 100 * tol);
    CHECK(traj.constraint_drift() < 100 * tol);
}

TEST_CASE("drift shrinks when re-integrating at tighter tolerance") {
    const ConeParams params = derive_params(2.1, 0.45, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory loose = integrate_strand(bc, initial_state(bc, 0.45), 0.0, 30.0, 1e-8);
    const Trajectory tight = integrate_strand(bc, initial_state(bc, 0.45), 0.0, 30.0, 1e-12);
    CHECK(tight.conservation_drift() <= loose.conservation_drift());
    CHECK(tight.conservation_drift() < 1e-10);
}

TEST_CASE("dense output matches the derivative field to O(h^2)") {
    const ConeParams params = derive_params(0.9, 0.5, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.5), 0.0, 10.0, 1e-12);
    const double h = 1e-5;
    for (double s : {1.0, 4.2, 8.5}) {
        const StrandState mid = traj.at(s);
        const StrandDerivative expect = strand_derivative(bc, mid);
        const StrandState lo = traj.at(s - h), hi = traj.at(s + h);
        for (int j = 0; j < 3; ++j) {
            const Complex fd = (hi.y[j] - lo.y[j]) / (2 * h);
            CHECK(std::abs(fd - expect.dy[j]) < 1e-8);
        }
        CHECK(std::abs((hi.v - lo.v) / (2 * h) - expect.dv) < 1e-8);
    }
}

TEST_CASE("bidirectional span covers negative parameters") {
    const ConeParams params = derive_params(1.0, 0.2, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.2), -5.0, 5.0, 1e-11);
    CHECK(traj.lo() == doctest::Approx(-5.0));
    CHECK(traj.hi() == doctest::Approx(5.0));
    CHECK(traj.conservation_drift() < 1e-9);
    CHECK_THROWS_AS((void)traj.at(5.5), coverage_error);
}

TEST_CASE("finite escape carries the blow-up parameter") {
    // All-positive coefficients with the all-ones start blow up at +1
    // (exact solution 1/(1 - r) componentwise).
    const StrandCoefficients ac{1, 1, 1, false};
    StrandState st;
    st.y = {1, 1, 1};
    st.v = 0;
    st.s = 0;
    try {
        (void)integrate_strand(ac, st, 0.0, 5.0, 1e-12);
        FAIL("expected finite_escape_error");
    } catch (const finite_escape_error& e) {
        CHECK(e.escape_param == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("phase integral matches unwrapped strand phases") {
    const ConeParams params = derive_params(1.0, 0.3, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.3), 0.0, 6.0, 1e-12);

    // Unwrap arg(y_j) along the trajectory.
    for (int j = 0; j < 3; ++j) {
        const double s_end = 5.0;
        double acc = 0;
        Complex prev = traj.at(0.0).y[j];
        const int n = 2000;
        for (int i = 1; i <= n; ++i) {
            const Complex cur = traj.at(s_end * double(i) / n).y[j];
            acc += std::arg(cur / prev);
            prev = cur;
        }
        const double direct = phase_integral(bc, 0.3, traj, j, s_end);
        CHECK(direct == doctest::Approx(acc).epsilon(1e-8));
    }
}

TEST_CASE("phase integral is zero at level zero") {
    const ConeParams params = derive_params(1.3, 0.0, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.0), 0.0, 5.0, 1e-11);
    for (int j = 0; j < 3; ++j) CHECK(phase_integral(bc, 0.0, traj, j, 5.0) == 0.0);
}

TEST_CASE("phase integral refuses a constraint pole") {
    // Evaluating with coefficients that do not belong to the trajectory can
    // push c_j v + 1 through zero; the quadrature must refuse rather than
    // integrate across the pole.
    const ConeParams params = derive_params(1.0, 0.6, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.6), 0.0, 6.0, 1e-11);
    const StrandCoefficients mismatched{-5.0, 5.0, 0.0, true};
    CHECK_THROWS_AS((void)phase_integral(mismatched, 0.6, traj, 0, 6.0), pole_error);
}

TEST_CASE("derivative of the strand product is real") {
    const ConeParams params = derive_params(1.7, 0.45, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.45), 0.0, 12.0, 1e-12);
    for (double s = 0; s <= 12.0; s += 0.53) {
        const StrandState st = traj.at(s);
        const StrandDerivative d = strand_derivative(bc, st);
        const Complex dprod = d.dy.z1 * st.y.z2 * st.y.z3 + st.y.z1 * d.dy.z2 * st.y.z3
                              + st.y.z1 * st.y.z2 * d.dy.z3;
        CHECK(std::abs(dprod.imag()) < 1e-10);
    }
}

TEST_CASE("trajectory csv schema") {
    const ConeParams params = derive_params(1.0, 0.1, 0.0);
    const StrandCoefficients bc = params.beta_coeffs();
    const Trajectory traj = integrate_strand(bc, initial_state(bc, 0.1), 0.0, 2.0, 1e-10);
    std::ostringstream os;
    write_trajectory_csv(os, traj, 16);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "s,re_y1,im_y1,re_y2,im_y2,re_y3,im_y3,v,conservation_residual");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 16);
}
