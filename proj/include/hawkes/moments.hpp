#ifndef HAWKES_MOMENTS_HPP
#define HAWKES_MOMENTS_HPP

#include <array>
#include <span>
#include <vector>

#include "hawkes/kernel.hpp"
#include "hawkes/marks.hpp"

namespace hawkes {

// Moment trajectory entry at one time point. aux_* fields carry the
// auxiliary Markov component xi of the Erlang kernel and are zero for the
// exponential kernel.
struct MomentReport {
    double t = 0.0;
    double mean_intensity = 0.0;           // E[lambda_t]
    double mean_count = 0.0;               // E[H_t]
    double second_moment_intensity = 0.0;  // E[lambda_t^2]
    double aux_mean = 0.0;                 // E[xi_t]
    double aux_second_moment = 0.0;        // E[xi_t^2]
    double cross_moment = 0.0;             // E[lambda_t xi_t]
};

// E[H_t] = mu t + mu \int_0^t psi(t-s) s ds; closed form for the
// exponential and Erlang kernels, quadrature on the resolvent grid for
// tabulated kernels.
double expected_count(const Kernel& kernel, double mu, double t);

// E[lambda_t] = mu (1 + \int_0^t psi), the derivative of expected_count.
double expected_intensity(const Kernel& kernel, double mu, double t);

// E[xi_t] for the Erlang auxiliary process, closed form.
double expected_erlang_xi(const Kernel& kernel, double mu, double t);

struct AsymptoticConstants {
    double sigma2 = 0.0;        // mu / (1 - ||Phi||_1)
    double sigma2_tilde = 0.0;  // mu / (1 - ||Phi||_1)^3
    double gamma = 0.0;         // 1 / (1 - ||Phi||_1)
    double limit_variance = 0.0;  // sigma2 * theta2
};

AsymptoticConstants asymptotic_constants(const Kernel& kernel, double mu,
                                         const MarkDistribution& marks);

// Second-moment trajectories from the Markov generator ODEs, exponential
// and Erlang kernels only (throws std::invalid_argument otherwise).
// t_grid must be nondecreasing and nonnegative.
std::vector<MomentReport> second_moment_ode(const Kernel& kernel, double mu,
                                            std::span<const double> t_grid);

// Drift matrix of the Erlang second-moment system in the state order
// (E[lambda^2], E[xi^2], E[lambda xi]).
std::array<std::array<double, 3>, 3> erlang_second_moment_matrix(double alpha, double beta);

}  // namespace hawkes

#endif
