#pragma once

#include <optional>
#include <vector>

#include "slcone/cone2.hpp"
#include "slcone/elliptic.hpp"

namespace slc {

/// Best rational approximation p/q with q <= max_den, by continued-fraction
/// convergents and semiconvergents. Empty when no q <= max_den comes within
/// tol of x.
struct Rational {
    long p = 0;
    long q = 1;
    double value() const { return double(p) / double(q); }
};

std::optional<Rational> rationalize(double x, long max_den, double tol);

/// Period of the potential of one strand, computed from the closed elliptic
/// form (primary value) and cross-checked by return-to-start event detection
/// on an integrated trajectory.
struct PeriodResult {
    enum class Kind { periodic, constant_potential, homoclinic };
    Kind kind = Kind::periodic;
    double S = 0;        // elliptic-integral value (periodic only)
    double S_event = 0;  // event-detection cross-check
};

PeriodResult strand_period(const StrandCoefficients& coeffs, double B, double tol = 1e-12);

/// Rotation phases over one potential period: y_j(s + S) = e^{i eta_j} y_j(s).
/// Quadrature of the phase rate along the closed-form potential.
std::array<double, 3> rotation_phases(const StrandCoefficients& coeffs, double B, double S);

/// Periodicity data of one strand: potential period, rotation phases, their
/// rationalizations (when all succeed) and the induced full strand period
/// multiple n (strand periodic with period n S).
struct PeriodData {
    double S = 0;
    std::array<double, 3> eta{};
    std::optional<std::array<Rational, 3>> rational_approx;
    std::optional<long> torus_multiple;
};

/// Rationalizes eta_j / pi and derives the smallest n with n eta_j in 2 pi Z
/// for all j. Leaves the optionals empty if any component fails.
PeriodData make_period_data(double S, const std::array<double, 3>& eta, long max_den,
                            double tol);

enum class SearchCase { case_a, case_b, case_c, generic };

struct TorusSearchConfig {
    SearchCase search_case = SearchCase::case_a;
    double theta = 0;     // fixed angle (cases a, c; start of sweep for b/generic)
    double B = 0;         // fixed level where the case demands one
    double sweep_lo = -0.9, sweep_hi = 0.9, sweep_step = 1e-3;
    // Secondary sweep (case b sweeps theta too; generic sweeps (theta, B)).
    std::vector<double> theta_values = {};
    std::vector<double> B_values = {};
    long max_den = 40;
    double tol = 1e-7;
    double verify_tol = 1e-6;
    double integrator_tol = 1e-10;
    double max_verify_span = 400.0; // drop candidates whose full period exceeds this
};

struct TorusCandidate {
    SearchCase search_case = SearchCase::case_a;
    double theta = 0, B = 0, C = 0;
    PeriodData y_data, z_data;
    Lattice2 lattice;
    long N = 1;
    double area_value = 0;
    double verify_residual = 0; // direct strand comparison over the full periods
    long sweep_index = 0;
    long max_denominator = 1;   // largest q among the rationalizations
};

/// Sweeps the requested case for doubly-periodic solutions. Every returned
/// candidate has been re-verified by direct strand comparison over the full
/// claimed periods. Sorted by max denominator, then sweep index.
std::vector<TorusCandidate> torus_search(const TorusSearchConfig& config);

/// Area record for a verified candidate.
struct TorusRecord {
    TorusCandidate candidate;
    double area_value = 0;
    double area_quadrature = 0; // direct 2-D quadrature of the area form
};

TorusRecord assemble_torus(const ConeParams& params, const PeriodData& y_data,
                           const PeriodData& z_data, const Lattice2& lattice);

std::string to_string(SearchCase c);

} // namespace slc
