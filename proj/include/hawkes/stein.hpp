#ifndef HAWKES_STEIN_HPP
#define HAWKES_STEIN_HPP

#include <cstdint>
#include <vector>

#include "hawkes/kernel.hpp"
#include "hawkes/marks.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

// Monte-Carlo estimates of every term of the Wasserstein bound for
// F_T = (X_T - m \int lambda) / sqrt(T) against N(0, sigma^2 theta^2):
//
//   d_W  <=  A11 + theta^2 A12 + |m| A13 + A2,
//
// where A11 = |sigma^2 theta^2 - (theta^2/T) E[H_T]| (exact),
// A12 = (1/T) E|\int (lambda_t - E[lambda_t]) dt|,
// A13 = (1/T) E|\int lambda_t hatM^t_T dt|, and A2 is the second-order term
//   A2 = T^{-3/2} E[\int lambda_t (E|Y|^3 + 2 E[Y|Y|] hatM^t_T
//                                  + E|Y| (hatM^t_T)^2) dt].
// a21 = T^{-3/2} E[H_T] (exact) and a22 = T^{-3/2} E[\int lambda |hatM|^2]
// are also reported so the looser classical grouping
// 2(E|Y|^3 a21 + E|Y| a22) can be reconstructed.
struct BoundReport {
    double T = 0.0;
    double a11 = 0.0;
    double a12 = 0.0, a12_se = 0.0;
    double a13 = 0.0, a13_se = 0.0;
    double a21 = 0.0;
    double a22 = 0.0, a22_se = 0.0;
    double a2 = 0.0, a2_se = 0.0;  // exact second-order term and its SE
    double total = 0.0;            // a11 + theta^2 a12 + |m| a13 + a2
    double total_se = 0.0;
    // Signed version of the A13 integrand (no absolute value); its mean is
    // zero in expectation, so this is a bias/consistency diagnostic.
    double a13_signed = 0.0, a13_signed_se = 0.0;
    std::size_t n_outer = 0;
    int k_grid = 0;
    std::uint64_t seed = 0;
};

// |sigma^2 theta^2 - (theta^2/T) E[H_T]|; deterministic, no sampling.
double estimate_a11(const Kernel& kernel, double mu, const MarkDistribution& marks, double T);

// (1/T) E|\int_0^T (lambda_t - E[lambda_t]) dt| over n paths; the random
// integral is the exact compensator. Returns {estimate, stderr}.
struct McEstimate {
    double value = 0.0;
    double se = 0.0;
};
McEstimate estimate_a12(const Kernel& kernel, double mu, const MarkDistribution& marks,
                        double T, std::size_t n, RandomState rs, int workers = 0);

// (1/T) E|\int_0^T lambda_t hatM^t_T dt| over n base paths, K-point
// trapezoid in t with one fresh shifted cascade per grid point.
McEstimate estimate_a13(const Kernel& kernel, double mu, const MarkDistribution& marks,
                        double T, std::size_t n, int K, RandomState rs, int workers = 0);

struct A2Estimate {
    double a21 = 0.0;  // T^{-3/2} E[H_T], exact
    double a22 = 0.0, a22_se = 0.0;
    double a2 = 0.0, a2_se = 0.0;  // exact second-order term
};
A2Estimate estimate_a2(const Kernel& kernel, double mu, const MarkDistribution& marks,
                       double T, std::size_t n, int K, RandomState rs, int workers = 0);

// All terms from one shared set of n base paths (each with K shifted
// cascades), assembled into the full bound.
BoundReport total_bound(const Kernel& kernel, double mu, const MarkDistribution& marks,
                        double T, std::size_t n, int K, RandomState rs, int workers = 0);

// Deterministic weight alpha_t for the generic bound: either the canonical
// 1/sqrt(T) or a user-supplied piecewise-linear table on [0, T].
struct WeightFunction {
    static WeightFunction canonical();  // alpha_t = 1/sqrt(T)
    static WeightFunction tabulated(std::vector<double> grid, std::vector<double> values);
    double evaluate(double t, double T) const;

    bool is_canonical = true;
    std::vector<double> grid;
    std::vector<double> values;
};

// Generic two-term bound on d_W(F_T^alpha, N(0, gamma2)) for the weighted
// statistic \int alpha dX - m \int alpha lambda dt. gamma2 must be chosen
// by the caller (std::domain_error if <= 0). The shifted increment
// \int_t^T alpha_s hat-lambda_s ds is evaluated by Simpson quadrature.
struct WeightedBoundReport {
    double T = 0.0;
    double gamma2 = 0.0;
    double term1 = 0.0, term1_se = 0.0;
    double term2 = 0.0, term2_se = 0.0;
    double total = 0.0;
};
WeightedBoundReport weighted_bound(const Kernel& kernel, double mu,
                                   const MarkDistribution& marks, const WeightFunction& alpha,
                                   double gamma2, double T, std::size_t n, int K,
                                   RandomState rs, int workers = 0);

}  // namespace hawkes

#endif
