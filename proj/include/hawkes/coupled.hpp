#ifndef HAWKES_COUPLED_HPP
#define HAWKES_COUPLED_HPP

#include <span>
#include <vector>

#include "hawkes/kernel.hpp"
#include "hawkes/marks.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

// One shifted cascade: the extra process created by inserting an event at
// shift_time into the driving noise. Its intensity is
// Phi(s - shift_time) + sum over its own events of Phi(s - T_j), with no
// baseline; the cascade lives strictly above the base path's acceptance
// band, so base and hat events never coincide.
struct ShiftPath {
    double shift_time = 0.0;
    double horizon = 0.0;
    std::vector<double> hat_event_times;    // strictly in (shift_time, horizon]
    std::vector<double> hat_marks;
    std::vector<double> hat_intensity_pre;  // hat intensity left limits
    double hat_compensator = 0.0;           // \int_t^T hat-lambda_u du
    double terminal_martingale = 0.0;       // hat-X_T - m * hat_compensator
};

// A base path together with shifted cascades at a grid of shift times.
struct CoupledRun {
    HawkesPath base;
    std::vector<double> grid_times;
    std::vector<ShiftPath> shifts;
};

// Simulates the shifted cascade at shift time t against the given base
// path. Candidates are drawn from fresh randomness: the hat band and the
// base band are disjoint regions of the driving Poisson measure, so the
// joint law is unchanged. Throws std::domain_error if t is outside
// [0, base.horizon].
ShiftPath simulate_shift(const HawkesPath& base, const Kernel& kernel, double mu,
                         const MarkDistribution& marks, double t, RandomState rs);

// Hat intensity left limit at s; zero for s <= shift_time. Throws
// std::domain_error for s outside [0, horizon].
double hat_intensity_at(const ShiftPath& shift, const Kernel& kernel, double s);

// Pathwise difference quotient of the normalized statistic under insertion
// of a mark x at the shift time: (x + terminal_martingale) / sqrt(T).
double malliavin_derivative(const ShiftPath& shift, double x, double T);

// Simulates the shifted cascades at several shift times with shared
// driving noise: the Poisson atoms above the base band are realized once
// (lazily, in horizontal layers of height sup Phi, stream rs.stream + 1 +
// layer) and every shift replays them, accepting an atom of height e at
// time u when e <= hat-lambda^t_u. Shifts therefore share events wherever
// their bands overlap, which is the correlation structure that makes
// \int lambda_t hat-M^t_T dt fluctuate at the sqrt(T) scale; independent
// per-shift noise would not reproduce it. Shift times must be
// nondecreasing and inside [0, base.horizon].
std::vector<ShiftPath> simulate_joint_shifts(const HawkesPath& base, const Kernel& kernel,
                                             double mu, const MarkDistribution& marks,
                                             std::span<const double> shift_times,
                                             RandomState rs);

// Trapezoid quadrature of \int_0^T lambda_t * hat-M^t_T dt over K uniform
// shift times, using one joint (shared-noise) set of shifted cascades.
// Requires K >= 2.
double lambda_hatM_integral(const HawkesPath& base, const Kernel& kernel, double mu,
                            const MarkDistribution& marks, int K, RandomState rs);

// Same quadrature, returning the full set of shifted cascades.
CoupledRun simulate_coupled_run(const HawkesPath& base, const Kernel& kernel, double mu,
                                const MarkDistribution& marks, int K, RandomState rs);

}  // namespace hawkes

#endif
