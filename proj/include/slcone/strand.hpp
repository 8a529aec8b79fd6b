#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "slcone/complex3.hpp"
#include "slcone/util.hpp"

namespace slc {

/// Coefficient triple of one strand ODE system. `zero_sum` asserts
/// c1+c2+c3 = 0 (the two-variable cone family needs it; the radial strand of
/// the three-variable family does not).
struct StrandCoefficients {
    double c1 = 0, c2 = 0, c3 = 0;
    bool zero_sum = false;

    StrandCoefficients() = default;
    StrandCoefficients(double a, double b, double c, bool zs = false);

    double operator[](int j) const { return j == 0 ? c1 : (j == 1 ? c2 : c3); }
    std::array<double, 3> as_array() const { return {c1, c2, c3}; }

    /// Q(v) = (c1 v + 1)(c2 v + 1)(c3 v + 1) and its v-derivative.
    double potential_cubic(double v) const;
    double potential_cubic_deriv(double v) const;
};

/// One strand sample: complex triple, real potential, parameter value.
struct StrandState {
    ComplexTriple y;
    double v = 0;
    double s = 0;
};

struct StrandDerivative {
    ComplexTriple dy;
    double dv = 0;
};

/// Right side of the strand system: dy_j = c_j conj(y_k y_l) (cyclic),
/// dv = 2 Re(y1 y2 y3).
StrandDerivative strand_derivative(const StrandCoefficients& coeffs, const StrandState& state);

/// Conserved level Im(y1 y2 y3) of a state.
double conserved_level(const StrandState& state);

/// max_j | |y_j|^2 - (c_j v + 1) |.
double constraint_residual(const StrandCoefficients& coeffs, const StrandState& state);

/// Canonical initial state at s = 0: v = 0, |y_j| = 1, phases (0, 0, asin B)
/// so that Im(y1 y2 y3) = B and Re(y1 y2 y3) = +sqrt(1 - B^2). An optional
/// zero-sum phase offset rotates the gauge without changing the level.
/// Throws invalid_level_error for |B| > 1.
StrandState initial_state(const StrandCoefficients& coeffs, double B,
                          const std::array<double, 3>& phase_offset = {0, 0, 0});

struct IntegrateOptions {
    double blowup_ceiling = 1e6; // max |y_j| before declaring finite escape
    std::size_t max_steps = 50'000'000;
    bool throw_on_escape = true; // otherwise the trajectory is truncated
};

/// Dense solution of one strand over an interval containing the initial
/// parameter. Immutable after construction; safe to share across threads.
class Trajectory {
  public:
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool covers(double s) const { return s >= lo_ - 1e-12 && s <= hi_ + 1e-12; }

    /// Dense-output evaluation. Throws coverage_error outside [lo, hi].
    StrandState at(double s) const;
    double potential_at(double s) const { return at(s).v; }

    const StrandCoefficients& coefficients() const { return coeffs_; }
    double level() const { return level_; }

    /// Accepted step endpoints, ascending.
    const std::vector<double>& nodes() const { return nodes_; }

    /// Max over dense samples of |Im(y1 y2 y3) - level| (n uniform samples).
    double conservation_drift(std::size_t n = 512) const;
    /// Max over dense samples of the Eq-of-motion norm constraint residual.
    double constraint_drift(std::size_t n = 512) const;

    static constexpr int kDim = 7;
    using Vec = std::array<double, kDim>;

    /// One accepted integrator step with its dense-output coefficients.
    struct Segment {
        double t0, h;            // interval [t0, t0+h] (h may be negative)
        std::array<Vec, 5> rcont;
    };

  private:
    friend Trajectory integrate_strand(const StrandCoefficients&, const StrandState&, double,
                                       double, double, const IntegrateOptions&);

    StrandState decode(const Vec& u, double s) const;
    const Segment& segment_for(double s) const;

    StrandCoefficients coeffs_;
    double level_ = 0;
    double lo_ = 0, hi_ = 0;
    std::vector<Segment> fwd_, bwd_; // forward: ascending t0; backward: descending
    std::vector<double> nodes_;
};

/// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) with dense output over
/// [lo, hi] which must contain initial.s. On blow-up past the ceiling, throws
/// finite_escape_error carrying the located escape parameter (or truncates if
/// options.throw_on_escape is false).
Trajectory integrate_strand(const StrandCoefficients& coeffs, const StrandState& initial,
                            double lo, double hi, double tol,
                            const IntegrateOptions& options = {});

/// Phase advance delta_j(s) - delta_j(0) of strand component j (0-based) by
/// adaptive quadrature of -c_j B / (c_j v + 1) along the trajectory.
/// Throws pole_error if the denominator is not positive somewhere on [0, s].
double phase_integral(const StrandCoefficients& coeffs, double B, const Trajectory& traj,
                      int j, double s);

/// CSV export: s, Re y1, Im y1, Re y2, Im y2, Re y3, Im y3, v, conservation
/// residual. `samples` uniform rows over the covered interval.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t samples = 512);

} // namespace slc
