#include "hawkes/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {

// \int_0^t (t-s) e^{-d s} ds = (d t - 1 + e^{-d t}) / d^2, d > 0.
double ramp_exp_integral(double d, double t) {
    // expm1 keeps the small-d*t regime accurate.
    return (d * t + std::expm1(-d * t)) / (d * d);
}

}  // namespace

double expected_count(const Kernel& kernel, double mu, double t) {
    switch (kernel.type()) {
        case KernelType::Zero:
            return mu * t;
        case KernelType::Exponential: {
            const double d = kernel.beta() - kernel.alpha();
            return mu * t + mu * kernel.alpha() * ramp_exp_integral(d, t);
        }
        case KernelType::Erlang: {
            const double r = std::sqrt(kernel.alpha());
            const double a1 = kernel.beta() - r;
            const double a2 = kernel.beta() + r;
            return mu * t +
                   mu * 0.5 * r * (ramp_exp_integral(a1, t) - ramp_exp_integral(a2, t));
        }
        case KernelType::Tabulated: {
            // mu t + mu \int_0^t psi(s) (t - s) ds, trapezoid on the psi grid.
            const auto& grid = kernel.psi_grid();
            const auto& psi = kernel.psi_values();
            double acc = 0.0;
            for (std::size_t i = 1; i < grid.size() && grid[i - 1] < t; ++i) {
                const double hi = std::min(grid[i], t);
                const double f0 = psi[i - 1] * (t - grid[i - 1]);
                const double f1 = kernel.psi(hi) * (t - hi);
                acc += 0.5 * (f0 + f1) * (hi - grid[i - 1]);
            }
            return mu * t + mu * acc;
        }
    }
    return mu * t;
}

double expected_intensity(const Kernel& kernel, double mu, double t) {
    switch (kernel.type()) {
        case KernelType::Zero:
            return mu;
        case KernelType::Exponential: {
            const double d = kernel.beta() - kernel.alpha();
            return mu * (1.0 - kernel.alpha() / d * std::expm1(-d * t));
        }
        case KernelType::Erlang: {
            const double r = std::sqrt(kernel.alpha());
            const double a1 = kernel.beta() - r;
            const double a2 = kernel.beta() + r;
            return mu * (1.0 - 0.5 * r * (std::expm1(-a1 * t) / a1 - std::expm1(-a2 * t) / a2));
        }
        case KernelType::Tabulated: {
            const auto& grid = kernel.psi_grid();
            const auto& psi = kernel.psi_values();
            double acc = 0.0;
            for (std::size_t i = 1; i < grid.size() && grid[i - 1] < t; ++i) {
                const double hi = std::min(grid[i], t);
                acc += 0.5 * (psi[i - 1] + kernel.psi(hi)) * (hi - grid[i - 1]);
            }
            return mu * (1.0 + acc);
        }
    }
    return mu;
}

double expected_erlang_xi(const Kernel& kernel, double mu, double t) {
    if (kernel.type() != KernelType::Erlang)
        throw std::invalid_argument("expected_erlang_xi: Erlang kernel required");
    // From d/dt E[lambda] = E[xi] + beta (mu - E[lambda]) and
    // d/dt E[lambda_t] = mu psi(t).
    return mu * kernel.psi(t) + kernel.beta() * (expected_intensity(kernel, mu, t) - mu);
}

AsymptoticConstants asymptotic_constants(const Kernel& kernel, double mu,
                                         const MarkDistribution& marks) {
    const double one_minus = 1.0 - kernel.phi_l1();
    AsymptoticConstants c;
    c.sigma2 = mu / one_minus;
    c.sigma2_tilde = mu / (one_minus * one_minus * one_minus);
    c.gamma = 1.0 / one_minus;
    c.limit_variance = c.sigma2 * marks.second_moment();
    return c;
}

std::array<std::array<double, 3>, 3> erlang_second_moment_matrix(double alpha, double beta) {
    return {{{-2.0 * beta, 0.0, 2.0},
             {0.0, -2.0 * beta, 2.0 * alpha},
             {alpha, 1.0, -2.0 * beta}}};
}

namespace {

// Fixed-step RK4 over a linear system dy/dt = f(y); records the state at
// each requested grid time by shortening the final step.
template <std::size_t N, typename Deriv, typename Record>
void integrate_to_grid(std::array<double, N> y, double h, std::span<const double> t_grid,
                       Deriv deriv, Record record) {
    auto step = [&](std::array<double, N>& state, double dt) {
        std::array<double, N> k1 = deriv(state), k2, k3, k4, tmp;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
        k2 = deriv(tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
        k3 = deriv(tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = state[i] + dt * k3[i];
        k4 = deriv(tmp);
        for (std::size_t i = 0; i < N; ++i)
            state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    };
    double t = 0.0;
    for (double target : t_grid) {
        while (t < target) {
            const double dt = std::min(h, target - t);
            step(y, dt);
            t += dt;
        }
        record(target, y);
    }
}

}  // namespace

std::vector<MomentReport> second_moment_ode(const Kernel& kernel, double mu,
                                            std::span<const double> t_grid) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] < t_grid[i - 1]))
            throw std::invalid_argument("second_moment_ode: grid must be nondecreasing, >= 0");
    }
    const double alpha = kernel.alpha();
    const double beta = kernel.beta();
    std::vector<MomentReport> out;
    out.reserve(t_grid.size());

    if (kernel.type() == KernelType::Exponential) {
        const double h = 1e-3 / beta;
        // State (E[lambda], E[lambda^2]); from the generator with g = id
        // and g = x^2.
        auto deriv = [&](const std::array<double, 2>& y) -> std::array<double, 2> {
            return {(alpha - beta) * y[0] + beta * mu,
                    2.0 * (alpha - beta) * y[1] + (2.0 * beta * mu + alpha * alpha) * y[0]};
        };
        integrate_to_grid<2>({mu, mu * mu}, h, t_grid, deriv,
                             [&](double t, const std::array<double, 2>& y) {
                                 MomentReport r;
                                 r.t = t;
                                 r.mean_intensity = y[0];
                                 r.mean_count = expected_count(kernel, mu, t);
                                 r.second_moment_intensity = y[1];
                                 out.push_back(r);
                             });
        return out;
    }
    if (kernel.type() == KernelType::Erlang) {
        const double h = 1e-3 / beta;
        const auto A = erlang_second_moment_matrix(alpha, beta);
        // State (E[lambda], E[xi], E[lambda^2], E[xi^2], E[lambda xi]).
        auto deriv = [&](const std::array<double, 5>& y) -> std::array<double, 5> {
            return {y[1] + beta * (mu - y[0]),
                    -beta * y[1] + alpha * y[0],
                    A[0][0] * y[2] + A[0][1] * y[3] + A[0][2] * y[4] + 2.0 * beta * mu * y[0],
                    A[1][0] * y[2] + A[1][1] * y[3] + A[1][2] * y[4] + alpha * alpha * y[0],
                    A[2][0] * y[2] + A[2][1] * y[3] + A[2][2] * y[4] + beta * mu * y[1]};
        };
        integrate_to_grid<5>({mu, 0.0, mu * mu, 0.0, 0.0}, h, t_grid, deriv,
                             [&](double t, const std::array<double, 5>& y) {
                                 MomentReport r;
                                 r.t = t;
                                 r.mean_intensity = y[0];
                                 r.aux_mean = y[1];
                                 r.mean_count = expected_count(kernel, mu, t);
                                 r.second_moment_intensity = y[2];
                                 r.aux_second_moment = y[3];
                                 r.cross_moment = y[4];
                                 out.push_back(r);
                             });
        return out;
    }
    throw std::invalid_argument("second_moment_ode: kernel has no Markov representation");
}

}  // namespace hawkes
