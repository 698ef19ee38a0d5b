#ifndef HAWKES_SIMULATE_HPP
#define HAWKES_SIMULATE_HPP

#include <vector>

#include "hawkes/kernel.hpp"
#include "hawkes/marks.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

// One realized trajectory of (X, H, lambda) on [0, T]. Immutable after
// creation; safe to share across threads.
struct HawkesPath {
    double horizon = 0.0;
    double mu = 0.0;
    std::vector<double> event_times;    // strictly increasing, in (0, T]
    std::vector<double> marks;          // one draw from nu per event
    std::vector<double> intensity_pre;  // lambda at each event's left limit
    RandomState seed;
};

// Simulates one path of the Hawkes SDE by thinning. The majorant is exact
// for the exponential kernel (intensity non-increasing between events) and
// piecewise-constant over refresh windows for Erlang/tabulated kernels; a
// candidate above the majorant aborts with std::logic_error.
HawkesPath simulate_hawkes(const Kernel& kernel, double mu, const MarkDistribution& marks,
                           double T, RandomState rs);

// Left-limit intensity mu + sum_{T_i < t} Phi(t - T_i); events at exactly
// t are excluded. Throws std::domain_error for t outside [0, T].
double intensity_at(const HawkesPath& path, const Kernel& kernel, double mu, double t);

// \int_0^T lambda_t dt, via exact antiderivatives of Phi.
double compensator(const HawkesPath& path, const Kernel& kernel, double mu);

// F_T = (X_T - m \int_0^T lambda_t dt) / sqrt(T).
double statistic_F(const HawkesPath& path, const Kernel& kernel, double mu,
                   const MarkDistribution& marks);

// Y_T = (H_T - E[H_T]) / sqrt(T), with the exact expected count.
double statistic_Y(const HawkesPath& path, const Kernel& kernel, double mu);

// Erlang auxiliary process xi_t = sum_{T_i < t} alpha e^{-beta (t - T_i)}.
double erlang_xi_at(const HawkesPath& path, const Kernel& kernel, double t);

namespace detail {

// Shared thinning core: a linear Hawkes cascade on (start, T] with
// intensity mu + [initial_excitation] Phi(s - start) + sum_j Phi(s - T_j).
// The base path uses (mu, no excitation, start = 0); the shifted cascade
// uses (0, excitation at the shift time).
struct Cascade {
    std::vector<double> times;
    std::vector<double> marks;
    std::vector<double> intensity_pre;
};

Cascade simulate_cascade(const Kernel& kernel, double mu, bool initial_excitation,
                         double start, double T, const MarkDistribution& marks, Rng& rng);

}  // namespace detail

}  // namespace hawkes

#endif
