#include "hawkes/stein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hawkes/coupled.hpp"
#include "hawkes/moments.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

namespace {

McEstimate mean_and_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n * (n - 1.0)))};
}

// Per-path contributions to every Monte-Carlo term.
struct PathTerms {
    double a12 = 0.0;
    double a13 = 0.0;
    double a13_signed = 0.0;
    double a22 = 0.0;
    double a2 = 0.0;
};

PathTerms path_terms(const Kernel& kernel, double mu, const MarkDistribution& marks,
                     double T, int K, RandomState base_rs) {
    HawkesPath base = simulate_hawkes(kernel, mu, marks, T, base_rs);
    PathTerms out;
    out.a12 = std::fabs(compensator(base, kernel, mu) - expected_count(kernel, mu, T)) / T;

    const double h = T / static_cast<double>(K - 1);
    const double abs1 = marks.abs_first_moment();
    const double abs3 = marks.abs_third_moment();
    const double sgn2 = marks.signed_square_moment();
    std::vector<double> grid(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
        grid[static_cast<std::size_t>(k)] = T * static_cast<double>(k) / static_cast<double>(K - 1);
    auto shifts = simulate_joint_shifts(base, kernel, mu, marks, grid, base_rs);
    double s13 = 0.0, s22 = 0.0, s2 = 0.0;
    for (int k = 0; k < K; ++k) {
        const double t = grid[static_cast<std::size_t>(k)];
        const double lambda = intensity_at(base, kernel, mu, t);
        const double M = shifts[static_cast<std::size_t>(k)].terminal_martingale;
        const double w = (k == 0 || k == K - 1) ? 0.5 * h : h;
        s13 += w * lambda * M;
        s22 += w * lambda * M * M;
        s2 += w * lambda * (abs3 + 2.0 * sgn2 * M + abs1 * M * M);
    }
    const double t32 = T * std::sqrt(T);
    out.a13 = std::fabs(s13) / T;
    out.a13_signed = s13 / T;
    out.a22 = s22 / t32;
    out.a2 = s2 / t32;
    return out;
}

std::vector<PathTerms> all_path_terms(const Kernel& kernel, double mu,
                                      const MarkDistribution& marks, double T, std::size_t n,
                                      int K, RandomState rs, int workers) {
    if (n < 2) throw std::invalid_argument("bound estimation: need n >= 2 paths");
    if (K < 2) throw std::invalid_argument("bound estimation: need grid size K >= 2");
    std::vector<PathTerms> terms(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            RandomState base_rs{rs.seed, rs.stream + derive_stream(0, i, 0)};
            terms[i] = path_terms(kernel, mu, marks, T, K, base_rs);
        },
        workers);
    return terms;
}

}  // namespace

double estimate_a11(const Kernel& kernel, double mu, const MarkDistribution& marks,
                    double T) {
    const auto c = asymptotic_constants(kernel, mu, marks);
    const double theta2 = marks.second_moment();
    return std::fabs(c.limit_variance - theta2 / T * expected_count(kernel, mu, T));
}

McEstimate estimate_a12(const Kernel& kernel, double mu, const MarkDistribution& marks,
                        double T, std::size_t n, RandomState rs, int workers) {
    if (n < 2) throw std::invalid_argument("estimate_a12: need n >= 2 paths");
    std::vector<double> xs(n);
    const double eh = expected_count(kernel, mu, T);
    parallel_for(
        n,
        [&](std::size_t i) {
            RandomState path_rs{rs.seed, rs.stream + derive_stream(0, i, 0)};
            HawkesPath path = simulate_hawkes(kernel, mu, marks, T, path_rs);
            xs[i] = std::fabs(compensator(path, kernel, mu) - eh) / T;
        },
        workers);
    return mean_and_se(xs);
}

McEstimate estimate_a13(const Kernel& kernel, double mu, const MarkDistribution& marks,
                        double T, std::size_t n, int K, RandomState rs, int workers) {
    auto terms = all_path_terms(kernel, mu, marks, T, n, K, rs, workers);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = terms[i].a13;
    return mean_and_se(xs);
}

A2Estimate estimate_a2(const Kernel& kernel, double mu, const MarkDistribution& marks,
                       double T, std::size_t n, int K, RandomState rs, int workers) {
    auto terms = all_path_terms(kernel, mu, marks, T, n, K, rs, workers);
    std::vector<double> a22(n), a2(n);
    for (std::size_t i = 0; i < n; ++i) {
        a22[i] = terms[i].a22;
        a2[i] = terms[i].a2;
    }
    A2Estimate out;
    out.a21 = expected_count(kernel, mu, T) / (T * std::sqrt(T));
    const auto m22 = mean_and_se(a22);
    out.a22 = m22.value;
    out.a22_se = m22.se;
    const auto m2 = mean_and_se(a2);
    out.a2 = m2.value;
    out.a2_se = m2.se;
    return out;
}

BoundReport total_bound(const Kernel& kernel, double mu, const MarkDistribution& marks,
                        double T, std::size_t n, int K, RandomState rs, int workers) {
    auto terms = all_path_terms(kernel, mu, marks, T, n, K, rs, workers);
    const double theta2 = marks.second_moment();
    const double abs_m = std::fabs(marks.mean());

    BoundReport r;
    r.T = T;
    r.n_outer = n;
    r.k_grid = K;
    r.seed = rs.seed;
    r.a11 = estimate_a11(kernel, mu, marks, T);
    r.a21 = expected_count(kernel, mu, T) / (T * std::sqrt(T));

    std::vector<double> a12(n), a13(n), a13s(n), a22(n), a2(n), tot(n);
    for (std::size_t i = 0; i < n; ++i) {
        a12[i] = terms[i].a12;
        a13[i] = terms[i].a13;
        a13s[i] = terms[i].a13_signed;
        a22[i] = terms[i].a22;
        a2[i] = terms[i].a2;
        tot[i] = theta2 * a12[i] + abs_m * a13[i] + a2[i];
    }
    const auto m12 = mean_and_se(a12);
    r.a12 = m12.value;
    r.a12_se = m12.se;
    const auto m13 = mean_and_se(a13);
    r.a13 = m13.value;
    r.a13_se = m13.se;
    const auto m13s = mean_and_se(a13s);
    r.a13_signed = m13s.value;
    r.a13_signed_se = m13s.se;
    const auto m22 = mean_and_se(a22);
    r.a22 = m22.value;
    r.a22_se = m22.se;
    const auto m2 = mean_and_se(a2);
    r.a2 = m2.value;
    r.a2_se = m2.se;
    const auto mtot = mean_and_se(tot);
    r.total = r.a11 + mtot.value;
    r.total_se = mtot.se;
    return r;
}

WeightFunction WeightFunction::canonical() { return WeightFunction{}; }

WeightFunction WeightFunction::tabulated(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size())
        throw std::invalid_argument("weight function: need matching grid/values, length >= 2");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("weight function: grid must be strictly increasing");
    WeightFunction w;
    w.is_canonical = false;
    w.grid = std::move(grid);
    w.values = std::move(values);
    return w;
}

double WeightFunction::evaluate(double t, double T) const {
    if (is_canonical) return 1.0 / std::sqrt(T);
    if (t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
    const double frac = (t - grid[i]) / (grid[i + 1] - grid[i]);
    return values[i] + frac * (values[i + 1] - values[i]);
}

WeightedBoundReport weighted_bound(const Kernel& kernel, double mu,
                                   const MarkDistribution& marks, const WeightFunction& alpha,
                                   double gamma2, double T, std::size_t n, int K,
                                   RandomState rs, int workers) {
    if (!(gamma2 > 0.0)) throw std::domain_error("weighted_bound: gamma2 must be positive");
    if (n < 2 || K < 2) throw std::invalid_argument("weighted_bound: need n >= 2, K >= 2");
    const double theta2 = marks.second_moment();
    const double m = marks.mean();
    const double abs1 = marks.abs_first_moment();
    const double abs3 = marks.abs_third_moment();
    const double sgn2 = marks.signed_square_moment();

    // \int_t^T alpha_s hat-lambda_s ds by composite Simpson; the hat
    // intensity is evaluated as its right limit at the shift time.
    auto weighted_hat_compensator = [&](const ShiftPath& shift) {
        const double t0 = shift.shift_time;
        if (alpha.is_canonical) return shift.hat_compensator / std::sqrt(T);
        auto integrand = [&](double s) {
            double lam = kernel.phi(s - t0);
            for (double tj : shift.hat_event_times) {
                if (tj >= s) break;
                lam += kernel.phi(s - tj);
            }
            return alpha.evaluate(s, T) * lam;
        };
        const int panels = 128;  // Simpson needs an even interval count
        const double h = (T - t0) / (2.0 * panels);
        if (!(h > 0.0)) return 0.0;
        double acc = integrand(t0) + integrand(T);
        for (int j = 1; j < 2 * panels; ++j)
            acc += (j % 2 == 1 ? 4.0 : 2.0) * integrand(t0 + h * static_cast<double>(j));
        return acc * h / 3.0;
    };

    std::vector<double> t1(n), t2(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            RandomState base_rs{rs.seed, rs.stream + derive_stream(1, i, 0)};
            HawkesPath base = simulate_hawkes(kernel, mu, marks, T, base_rs);
            const double h = T / static_cast<double>(K - 1);
            std::vector<double> grid(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k)
                grid[static_cast<std::size_t>(k)] =
                    T * static_cast<double>(k) / static_cast<double>(K - 1);
            auto shifts = simulate_joint_shifts(base, kernel, mu, marks, grid, base_rs);
            double s1 = 0.0, s2 = 0.0;
            for (int k = 0; k < K; ++k) {
                const double t = grid[static_cast<std::size_t>(k)];
                const ShiftPath& shift = shifts[static_cast<std::size_t>(k)];
                // Weighted shifted martingale: sum of alpha at the hat
                // events times their marks, minus m \int alpha hat-lambda.
                double M = -m * weighted_hat_compensator(shift);
                for (std::size_t j = 0; j < shift.hat_event_times.size(); ++j)
                    M += alpha.evaluate(shift.hat_event_times[j], T) * shift.hat_marks[j];
                const double a = alpha.evaluate(t, T);
                const double lambda = intensity_at(base, kernel, mu, t);
                const double w = (k == 0 || k == K - 1) ? 0.5 * h : h;
                s1 += w * a * lambda * (a * theta2 + m * M);
                s2 += w * std::fabs(a) * lambda *
                      (a * a * abs3 + 2.0 * a * sgn2 * M + abs1 * M * M);
            }
            t1[i] = std::fabs(gamma2 - s1);
            t2[i] = s2;
        },
        workers);

    WeightedBoundReport r;
    r.T = T;
    r.gamma2 = gamma2;
    const auto m1 = mean_and_se(t1);
    r.term1 = m1.value;
    r.term1_se = m1.se;
    const auto m2e = mean_and_se(t2);
    r.term2 = m2e.value;
    r.term2_se = m2e.se;
    r.total = r.term1 + r.term2;
    return r;
}

}  // namespace hawkes
