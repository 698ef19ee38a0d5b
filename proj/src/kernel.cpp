#include "hawkes/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hawkes {

namespace {

double lerp_on_grid(const std::vector<double>& grid, const std::vector<double>& values,
                    double t) {
    if (grid.empty() || t > grid.back()) return 0.0;
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    if (it == grid.begin()) return values.front();
    std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
    if (i + 1 >= grid.size()) return values.back();
    const double w = (t - grid[i]) / (grid[i + 1] - grid[i]);
    return values[i] + w * (values[i + 1] - values[i]);
}

}  // namespace

Kernel Kernel::zero() {
    Kernel k;
    k.type_ = KernelType::Zero;
    return k;
}

Kernel Kernel::exponential(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("exponential kernel: requires alpha > 0 and beta > 0");
    if (!(alpha < beta))
        throw std::invalid_argument("stability: requires alpha < beta");
    Kernel k;
    k.type_ = KernelType::Exponential;
    k.alpha_ = alpha;
    k.beta_ = beta;
    k.phi_l1_ = alpha / beta;
    return k;
}

Kernel Kernel::erlang(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("erlang kernel: requires alpha > 0 and beta > 0");
    if (!(alpha < beta * beta))
        throw std::invalid_argument("stability: requires alpha < beta^2");
    Kernel k;
    k.type_ = KernelType::Erlang;
    k.alpha_ = alpha;
    k.beta_ = beta;
    k.phi_l1_ = alpha / (beta * beta);
    return k;
}

Kernel Kernel::tabulated(std::vector<double> grid, std::vector<double> values,
                         double psi_step, double psi_horizon) {
    if (grid.size() < 2 || grid.size() != values.size())
        throw std::invalid_argument("tabulated kernel: need matching grid/values, length >= 2");
    if (grid.front() != 0.0)
        throw std::invalid_argument("tabulated kernel: grid must start at 0");
    double min_spacing = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(grid[i + 1] > grid[i]))
            throw std::invalid_argument("tabulated kernel: grid must be strictly increasing");
        min_spacing = std::min(min_spacing, grid[i + 1] - grid[i]);
    }
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("tabulated kernel: values must be finite and nonnegative");

    Kernel k;
    k.type_ = KernelType::Tabulated;
    k.grid_ = std::move(grid);
    k.values_ = std::move(values);

    // Cumulative trapezoidal integral of the piecewise-linear kernel.
    k.cum_integral_.resize(k.grid_.size());
    k.cum_integral_[0] = 0.0;
    for (std::size_t i = 1; i < k.grid_.size(); ++i)
        k.cum_integral_[i] = k.cum_integral_[i - 1] + 0.5 * (k.values_[i] + k.values_[i - 1]) *
                                                         (k.grid_[i] - k.grid_[i - 1]);
    k.phi_l1_ = k.cum_integral_.back();
    if (!(k.phi_l1_ < 1.0))
        throw std::invalid_argument("stability: requires ||Phi||_1 < 1, got " +
                                    std::to_string(k.phi_l1_));

    // Resolvent by Picard iteration of psi = Phi + Phi*psi on a uniform
    // grid. The map is a contraction with factor ||Phi||_1, so the iterates
    // converge geometrically; the tail beyond the horizon is below the
    // geometric remainder of the convolution series.
    const double support = k.grid_.back();
    double h = psi_step > 0.0 ? psi_step : std::min(min_spacing, support / 256.0);
    double horizon = psi_horizon;
    if (horizon <= 0.0) {
        const double folds =
            std::ceil(-12.0 * std::log(10.0) / std::log(std::max(k.phi_l1_, 1e-6)));
        horizon = support * std::clamp(folds, 4.0, 64.0);
    }
    const std::size_t n = static_cast<std::size_t>(std::ceil(horizon / h)) + 1;
    const std::size_t support_n =
        std::min(n, static_cast<std::size_t>(std::ceil(support / h)) + 1);
    k.psi_step_ = h;
    k.psi_grid_.resize(n);
    std::vector<double> phi_nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        k.psi_grid_[i] = static_cast<double>(i) * h;
        phi_nodes[i] = lerp_on_grid(k.grid_, k.values_, k.psi_grid_[i]);
    }
    std::vector<double> psi = phi_nodes;
    std::vector<double> next(n);
    for (int iter = 0; iter < 200; ++iter) {
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // (Phi*psi)(t_i) over u in [0, min(t_i, support)].
            const std::size_t m = std::min(i, support_n - 1);
            double conv = 0.0;
            for (std::size_t j = 0; j <= m; ++j) {
                const double term = phi_nodes[j] * psi[i - j];
                conv += (j == 0 || j == m) ? 0.5 * term : term;
            }
            conv *= h;
            next[i] = phi_nodes[i] + conv;
            diff = std::max(diff, std::fabs(next[i] - psi[i]));
        }
        psi.swap(next);
        if (diff < 1e-9) break;
    }
    k.psi_values_ = std::move(psi);
    return k;
}

double Kernel::phi(double t) const {
    if (t < 0.0) throw std::domain_error("phi: negative time");
    switch (type_) {
        case KernelType::Zero:
            return 0.0;
        case KernelType::Exponential:
            return alpha_ * std::exp(-beta_ * t);
        case KernelType::Erlang:
            return alpha_ * t * std::exp(-beta_ * t);
        case KernelType::Tabulated:
            return lerp_on_grid(grid_, values_, t);
    }
    return 0.0;
}

double Kernel::phi_integral(double t) const {
    if (t < 0.0) throw std::domain_error("phi_integral: negative time");
    switch (type_) {
        case KernelType::Zero:
            return 0.0;
        case KernelType::Exponential:
            return alpha_ / beta_ * (1.0 - std::exp(-beta_ * t));
        case KernelType::Erlang:
            return alpha_ / (beta_ * beta_) *
                   (1.0 - std::exp(-beta_ * t) * (1.0 + beta_ * t));
        case KernelType::Tabulated: {
            if (t >= grid_.back()) return cum_integral_.back();
            auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
            std::size_t i = static_cast<std::size_t>(it - grid_.begin());
            i = i == 0 ? 0 : i - 1;
            const double v = lerp_on_grid(grid_, values_, t);
            return cum_integral_[i] + 0.5 * (values_[i] + v) * (t - grid_[i]);
        }
    }
    return 0.0;
}

double Kernel::psi(double t) const {
    if (t < 0.0) throw std::domain_error("psi: negative time");
    switch (type_) {
        case KernelType::Zero:
            return 0.0;
        case KernelType::Exponential:
            return alpha_ * std::exp(-(beta_ - alpha_) * t);
        case KernelType::Erlang: {
            const double r = std::sqrt(alpha_);
            return 0.5 * r * (std::exp((r - beta_) * t) - std::exp(-(r + beta_) * t));
        }
        case KernelType::Tabulated:
            return lerp_on_grid(psi_grid_, psi_values_, t);
    }
    return 0.0;
}

double Kernel::psi_l1() const { return phi_l1_ / (1.0 - phi_l1_); }

double Kernel::phi_sup(double a, double b) const {
    switch (type_) {
        case KernelType::Zero:
            return 0.0;
        case KernelType::Exponential:
            return alpha_ * std::exp(-beta_ * a);
        case KernelType::Erlang: {
            const double peak = 1.0 / beta_;
            if (a <= peak && peak <= b) return phi(peak);
            return std::max(phi(a), phi(b));
        }
        case KernelType::Tabulated: {
            if (a >= grid_.back()) return 0.0;
            const double hi = std::min(b, grid_.back());
            double best = std::max(phi(a), phi(hi));
            auto lo_it = std::upper_bound(grid_.begin(), grid_.end(), a);
            auto hi_it = std::lower_bound(grid_.begin(), grid_.end(), hi);
            for (auto it = lo_it; it != hi_it; ++it)
                best = std::max(best, values_[static_cast<std::size_t>(it - grid_.begin())]);
            return best;
        }
    }
    return 0.0;
}

double Kernel::majorant_window() const {
    switch (type_) {
        case KernelType::Erlang:
            return 0.1 / beta_;
        case KernelType::Tabulated: {
            double step = grid_.back();
            for (std::size_t i = 1; i < grid_.size(); ++i)
                step = std::min(step, grid_[i] - grid_[i - 1]);
            return step;
        }
        default:
            return std::numeric_limits<double>::infinity();
    }
}

double Kernel::support_end() const {
    switch (type_) {
        case KernelType::Zero:
            return 0.0;
        case KernelType::Tabulated:
            return grid_.back();
        default:
            return std::numeric_limits<double>::infinity();
    }
}

}  // namespace hawkes
