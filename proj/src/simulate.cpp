#include "hawkes/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "hawkes/moments.hpp"

namespace hawkes {

namespace detail {

namespace {

constexpr double kMinRate = 1e-300;

void accept_event(Cascade& out, double s, double lambda, const MarkDistribution& marks,
                  Rng& rng) {
    out.times.push_back(s);
    out.intensity_pre.push_back(lambda);
    out.marks.push_back(marks.sample(rng));
}

Cascade cascade_exponential(const Kernel& kernel, double mu, bool initial_excitation,
                            double start, double T, const MarkDistribution& marks,
                            Rng& rng) {
    Cascade out;
    const double alpha = kernel.alpha();
    const double beta = kernel.beta();
    // g = lambda(s+) - mu; non-increasing until the next event, so mu + g
    // is an exact local majorant.
    double g = initial_excitation ? alpha : 0.0;
    double s = start;
    while (true) {
        const double rate = mu + g;
        if (rate < kMinRate) break;
        const double w = rng.exponential(rate);
        s += w;
        if (s > T) break;
        g *= std::exp(-beta * w);
        const double lambda = mu + g;
        if (rng.uniform() * rate <= lambda) {
            accept_event(out, s, lambda, marks, rng);
            g += alpha;
        }
    }
    return out;
}

Cascade cascade_erlang(const Kernel& kernel, double mu, bool initial_excitation,
                       double start, double T, const MarkDistribution& marks, Rng& rng) {
    Cascade out;
    const double alpha = kernel.alpha();
    const double beta = kernel.beta();
    const double window = kernel.majorant_window();
    // Markov pair: lambda = mu + z with dz = (xi - beta z) ds,
    // dxi = -beta xi ds + alpha dH.
    double z = 0.0;
    double xi = initial_excitation ? alpha : 0.0;
    auto advance = [&](double dt) {
        const double decay = std::exp(-beta * dt);
        z = decay * (z + xi * dt);
        xi *= decay;
    };
    // sup of z over the next dt, from d/dw [e^{-beta w}(z + xi w)] = 0.
    auto z_sup = [&](double dt) {
        double best = std::max(z, std::exp(-beta * dt) * (z + xi * dt));
        if (xi > 0.0) {
            const double w_star = (xi - beta * z) / (beta * xi);
            if (w_star > 0.0 && w_star < dt)
                best = std::max(best, std::exp(-beta * w_star) * (z + xi * w_star));
        }
        return best;
    };
    double s = start;
    while (s < T) {
        const double end = std::min(s + window, T);
        const double rate = mu + z_sup(end - s);
        if (rate < kMinRate) {
            advance(end - s);
            s = end;
            continue;
        }
        const double w = rng.exponential(rate);
        if (s + w >= end) {
            advance(end - s);
            s = end;
            continue;
        }
        advance(w);
        s += w;
        const double lambda = mu + z;
        if (lambda > rate * (1.0 + 1e-9))
            throw std::logic_error("thinning majorant violated (Erlang)");
        if (rng.uniform() * rate <= lambda) {
            accept_event(out, s, lambda, marks, rng);
            xi += alpha;
        }
    }
    return out;
}

Cascade cascade_tabulated(const Kernel& kernel, double mu, bool initial_excitation,
                          double start, double T, const MarkDistribution& marks,
                          Rng& rng) {
    Cascade out;
    const double window = kernel.majorant_window();
    const double support = kernel.support_end();
    std::vector<double> sources;  // excitation origins, sorted
    if (initial_excitation) sources.push_back(start);
    std::size_t first_active = 0;
    auto lambda_at = [&](double u) {
        double v = mu;
        for (std::size_t j = first_active; j < sources.size(); ++j)
            v += kernel.phi(u - sources[j]);
        return v;
    };
    double s = start;
    while (s < T) {
        while (first_active < sources.size() && s - sources[first_active] > support)
            ++first_active;
        const double end = std::min(s + window, T);
        double rate = mu;
        for (std::size_t j = first_active; j < sources.size(); ++j)
            rate += kernel.phi_sup(s - sources[j], end - sources[j]);
        if (rate < kMinRate) {
            if (mu < kMinRate && first_active == sources.size()) break;
            s = end;
            continue;
        }
        const double w = rng.exponential(rate);
        if (s + w >= end) {
            s = end;
            continue;
        }
        s += w;
        const double lambda = lambda_at(s);
        if (lambda > rate * (1.0 + 1e-9))
            throw std::logic_error("thinning majorant violated (tabulated)");
        if (rng.uniform() * rate <= lambda) {
            accept_event(out, s, lambda, marks, rng);
            sources.push_back(s);
        }
    }
    return out;
}

Cascade cascade_zero(double mu, double start, double T, const MarkDistribution& marks,
                     Rng& rng) {
    Cascade out;
    if (mu < kMinRate) return out;
    double s = start;
    while (true) {
        s += rng.exponential(mu);
        if (s > T) break;
        // Keep the accept draw so the candidate stream layout matches the
        // other kernels.
        (void)rng.uniform();
        accept_event(out, s, mu, marks, rng);
    }
    return out;
}

}  // namespace

Cascade simulate_cascade(const Kernel& kernel, double mu, bool initial_excitation,
                         double start, double T, const MarkDistribution& marks, Rng& rng) {
    switch (kernel.type()) {
        case KernelType::Zero:
            return cascade_zero(mu, start, T, marks, rng);
        case KernelType::Exponential:
            return cascade_exponential(kernel, mu, initial_excitation, start, T, marks, rng);
        case KernelType::Erlang:
            return cascade_erlang(kernel, mu, initial_excitation, start, T, marks, rng);
        case KernelType::Tabulated:
            return cascade_tabulated(kernel, mu, initial_excitation, start, T, marks, rng);
    }
    return {};
}

}  // namespace detail

HawkesPath simulate_hawkes(const Kernel& kernel, double mu, const MarkDistribution& marks,
                           double T, RandomState rs) {
    if (!(T > 0.0)) throw std::domain_error("simulate_hawkes: horizon must be positive");
    if (!(mu > 0.0)) throw std::domain_error("simulate_hawkes: mu must be positive");
    Rng rng(rs);
    auto cascade = detail::simulate_cascade(kernel, mu, false, 0.0, T, marks, rng);
    HawkesPath path;
    path.horizon = T;
    path.mu = mu;
    path.event_times = std::move(cascade.times);
    path.marks = std::move(cascade.marks);
    path.intensity_pre = std::move(cascade.intensity_pre);
    path.seed = rs;
    return path;
}

double intensity_at(const HawkesPath& path, const Kernel& kernel, double mu, double t) {
    if (t < 0.0 || t > path.horizon) throw std::domain_error("intensity_at: t outside [0,T]");
    double v = mu;
    for (double ti : path.event_times) {
        if (ti >= t) break;
        v += kernel.phi(t - ti);
    }
    return v;
}

double compensator(const HawkesPath& path, const Kernel& kernel, double mu) {
    double acc = mu * path.horizon;
    for (double ti : path.event_times) acc += kernel.phi_integral(path.horizon - ti);
    return acc;
}

double statistic_F(const HawkesPath& path, const Kernel& kernel, double mu,
                   const MarkDistribution& marks) {
    double x = 0.0;
    for (double y : path.marks) x += y;
    return (x - marks.mean() * compensator(path, kernel, mu)) / std::sqrt(path.horizon);
}

double statistic_Y(const HawkesPath& path, const Kernel& kernel, double mu) {
    const double count = static_cast<double>(path.event_times.size());
    return (count - expected_count(kernel, mu, path.horizon)) / std::sqrt(path.horizon);
}

double erlang_xi_at(const HawkesPath& path, const Kernel& kernel, double t) {
    if (kernel.type() != KernelType::Erlang)
        throw std::invalid_argument("erlang_xi_at: Erlang kernel required");
    double xi = 0.0;
    for (double ti : path.event_times) {
        if (ti >= t) break;
        xi += kernel.alpha() * std::exp(-kernel.beta() * (t - ti));
    }
    return xi;
}

}  // namespace hawkes
