#include "hawkes/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hawkes/moments.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

std::string statistic_name(Statistic s) { return s == Statistic::F ? "F" : "Y"; }

double empirical_w1_to_gaussian(std::span<const double> samples, double gamma2) {
    if (samples.empty()) throw std::domain_error("empirical_w1_to_gaussian: empty sample");
    if (!(gamma2 > 0.0))
        throw std::domain_error("empirical_w1_to_gaussian: gamma2 must be positive");
    const double gamma = std::sqrt(gamma2);
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        acc += std::fabs(sorted[i] - gamma * normal_quantile(p));
    }
    return acc / static_cast<double>(n);
}

double bootstrap_w1_se(std::span<const double> samples, double gamma2, RandomState rs,
                       int resamples) {
    if (samples.empty() || resamples < 2)
        throw std::domain_error("bootstrap_w1_se: need samples and >= 2 resamples");
    const std::size_t n = samples.size();
    Rng rng(rs);
    std::vector<double> stats(static_cast<std::size_t>(resamples));
    std::vector<double> draw(n);
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j =
                std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
            draw[i] = samples[j];
        }
        stats[static_cast<std::size_t>(b)] = empirical_w1_to_gaussian(draw, gamma2);
    }
    const double mean = std::accumulate(stats.begin(), stats.end(), 0.0) /
                        static_cast<double>(resamples);
    double ss = 0.0;
    for (double s : stats) ss += (s - mean) * (s - mean);
    return std::sqrt(ss / static_cast<double>(resamples - 1));
}

DistanceSeries distance_curve(const Kernel& kernel, double mu, const MarkDistribution& marks,
                              std::span<const double> T_grid, std::size_t n,
                              Statistic statistic, RandomState rs, double gamma2_override,
                              int workers) {
    if (n < 500) throw std::invalid_argument("distance_curve: need n >= 500 per horizon");
    for (std::size_t i = 0; i < T_grid.size(); ++i) {
        if (!(T_grid[i] > 0.0) || (i > 0 && !(T_grid[i] > T_grid[i - 1])))
            throw std::invalid_argument("distance_curve: horizons must be positive, increasing");
    }
    const auto constants = asymptotic_constants(kernel, mu, marks);
    DistanceSeries series;
    series.statistic = statistic;
    series.gamma2 = gamma2_override > 0.0
                        ? gamma2_override
                        : (statistic == Statistic::F ? constants.limit_variance
                                                     : constants.sigma2_tilde);

    for (std::size_t ti = 0; ti < T_grid.size(); ++ti) {
        const double T = T_grid[ti];
        std::vector<double> samples(n);
        parallel_for(
            n,
            [&](std::size_t p) {
                RandomState path_rs{rs.seed, rs.stream + derive_stream(ti, p, 0)};
                HawkesPath path = simulate_hawkes(kernel, mu, marks, T, path_rs);
                samples[p] = statistic == Statistic::F
                                 ? statistic_F(path, kernel, mu, marks)
                                 : statistic_Y(path, kernel, mu);
            },
            workers);

        DistanceEntry entry;
        entry.T = T;
        entry.n = n;
        entry.d_hat = empirical_w1_to_gaussian(samples, series.gamma2);
        entry.se_boot = bootstrap_w1_se(samples, series.gamma2,
                                        {rs.seed, rs.stream + derive_stream(ti, n, 1)});
        // Floor: score one exact Gaussian n-sample with the same estimator.
        {
            Rng g(rs.seed, rs.stream + derive_stream(ti, n, 2));
            const double gamma = std::sqrt(series.gamma2);
            std::vector<double> exact(n);
            for (auto& v : exact) v = gamma * g.normal();
            entry.floor_estimate = empirical_w1_to_gaussian(exact, series.gamma2);
        }
        entry.floor_flag = entry.floor_estimate > 0.25 * entry.d_hat;
        series.entries.push_back(entry);
    }
    return series;
}

RateFit fit_rate(const DistanceSeries& series) {
    if (series.entries.size() < 4)
        throw std::domain_error("fit_rate: need at least 4 horizons");
    std::vector<double> xs, ys;
    for (const auto& e : series.entries) {
        if (!(e.d_hat > 0.0)) throw std::domain_error("fit_rate: distances must be positive");
        xs.push_back(std::log(e.T));
        ys.push_back(std::log(e.d_hat));
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace hawkes
