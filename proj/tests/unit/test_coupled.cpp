#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hawkes/coupled.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/marks.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"

using namespace hawkes;

namespace {

struct Welford {
    long n = 0;
    double mean = 0.0, m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double var() const { return m2 / (n - 1); }
    double se_mean() const { return std::sqrt(var() / n); }
};

HawkesPath dummy_base(double T) {
    HawkesPath p;
    p.horizon = T;
    p.mu = 1.0;
    return p;
}

// Integrated exponential resolvent for alpha=1, beta=2: psi(s) = e^{-s}.
double exp_psi_integral(double u) { return 1.0 - std::exp(-u); }

// Integrated Erlang resolvent for alpha=1, beta=2:
// psi(s) = (1/2)(e^{-s} - e^{-3s}).
double erlang_psi_integral(double u) {
    return 0.5 * ((1.0 - std::exp(-u)) - (1.0 - std::exp(-3.0 * u)) / 3.0);
}

void check_shift_invariants(const ShiftPath& s) {
    CHECK(s.hat_marks.size() == s.hat_event_times.size());
    CHECK(s.hat_intensity_pre.size() == s.hat_event_times.size());
    double prev = s.shift_time;
    for (double tj : s.hat_event_times) {
        CHECK(tj > prev);
        CHECK(tj <= s.horizon);
        prev = tj;
    }
}

}  // namespace

TEST_SUITE("coupled") {

TEST_CASE("shift times outside the horizon are rejected") {
    auto base = dummy_base(2.0);
    Kernel k = Kernel::exponential(1.0, 2.0);
    auto nu = MarkDistribution::point_mass_one();
    CHECK_THROWS_AS(simulate_shift(base, k, 1.0, nu, -0.1, {1, 0}), std::domain_error);
    CHECK_THROWS_AS(simulate_shift(base, k, 1.0, nu, 2.1, {1, 0}), std::domain_error);
    std::vector<double> bad{1.5, 0.5};
    CHECK_THROWS_AS(simulate_joint_shifts(base, k, 1.0, nu, bad, {1, 0}),
                    std::invalid_argument);
    std::vector<double> out{0.5, 3.0};
    CHECK_THROWS_AS(simulate_joint_shifts(base, k, 1.0, nu, out, {1, 0}), std::domain_error);
}

TEST_CASE("zero kernel yields empty cascades and a zero coupling integral") {
    auto base = simulate_hawkes(Kernel::zero(), 2.0, MarkDistribution::point_mass_one(),
                                5.0, {3, 0});
    Kernel k = Kernel::zero();
    auto nu = MarkDistribution::point_mass_one();
    auto s = simulate_shift(base, k, 2.0, nu, 1.0, {3, 1});
    CHECK(s.hat_event_times.empty());
    CHECK(s.hat_compensator == 0.0);
    CHECK(s.terminal_martingale == 0.0);
    std::vector<double> grid{0.0, 2.5, 5.0};
    auto js = simulate_joint_shifts(base, k, 2.0, nu, grid, {3, 2});
    REQUIRE(js.size() == 3);
    for (const auto& sp : js) CHECK(sp.hat_event_times.empty());
    CHECK(lambda_hatM_integral(base, k, 2.0, nu, 8, {3, 3}) == 0.0);
}

TEST_CASE("cascade events live strictly after the shift time") {
    auto base = dummy_base(10.0);
    auto nu = MarkDistribution::point_mass_one();
    for (const Kernel& k : {Kernel::exponential(1.0, 2.0), Kernel::erlang(3.0, 2.0),
                            Kernel::tabulated({0.0, 1.0, 2.0}, {0.0, 0.6, 0.0})}) {
        for (std::uint64_t r = 0; r < 30; ++r) {
            auto s = simulate_shift(base, k, 1.0, nu, 2.0, {5, r});
            CHECK(s.shift_time == 2.0);
            CHECK(s.horizon == 10.0);
            check_shift_invariants(s);
        }
        std::vector<double> grid{0.0, 2.0, 5.0, 10.0};
        for (std::uint64_t r = 0; r < 30; ++r) {
            auto js = simulate_joint_shifts(base, k, 1.0, nu, grid, {6, r});
            REQUIRE(js.size() == grid.size());
            for (std::size_t i = 0; i < js.size(); ++i) {
                CHECK(js[i].shift_time == grid[i]);
                check_shift_invariants(js[i]);
            }
        }
    }
}

TEST_CASE("joint shifts are deterministic and duplicates coincide") {
    auto base = dummy_base(8.0);
    Kernel k = Kernel::erlang(1.0, 2.0);
    auto nu = MarkDistribution::gaussian(0.5, 1.0);
    std::vector<double> grid{1.0, 1.0, 4.0};
    auto a = simulate_joint_shifts(base, k, 1.0, nu, grid, {7, 11});
    auto b = simulate_joint_shifts(base, k, 1.0, nu, grid, {7, 11});
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].hat_event_times.size() == b[i].hat_event_times.size());
        for (std::size_t j = 0; j < a[i].hat_event_times.size(); ++j) {
            CHECK(a[i].hat_event_times[j] == b[i].hat_event_times[j]);
            CHECK(a[i].hat_marks[j] == b[i].hat_marks[j]);
        }
        CHECK(a[i].terminal_martingale == b[i].terminal_martingale);
    }
    // Equal shift times consult the same shared noise, so the replayed
    // cascades must be identical.
    REQUIRE(a[0].hat_event_times.size() == a[1].hat_event_times.size());
    for (std::size_t j = 0; j < a[0].hat_event_times.size(); ++j)
        CHECK(a[0].hat_event_times[j] == a[1].hat_event_times[j]);
    CHECK(a[0].terminal_martingale == a[1].terminal_martingale);
}

TEST_CASE("mean shifted intensity follows the resolvent") {
    auto base = dummy_base(4.0);
    Kernel k = Kernel::exponential(1.0, 2.0);
    auto nu = MarkDistribution::point_mass_one();
    const double t = 0.5;
    for (double u : {0.5, 1.5}) {
        Welford w;
        for (std::uint64_t r = 0; r < 20000; ++r) {
            auto s = simulate_shift(base, k, 1.0, nu, t, {8, r});
            w.add(hat_intensity_at(s, k, t + u));
        }
        // E[hat-lambda_{t+u}] = psi(u) = e^{-u} for alpha=1, beta=2.
        CHECK(std::fabs(w.mean - std::exp(-u)) < 4.0 * w.se_mean());
    }
    CHECK(hat_intensity_at(simulate_shift(base, k, 1.0, nu, t, {8, 0}), k, 0.2) == 0.0);
}

TEST_CASE("mean cascade size matches the integrated resolvent") {
    const double T = 6.0, t = 1.0;
    auto base = dummy_base(T);
    auto nu = MarkDistribution::point_mass_one();
    struct Case {
        Kernel k;
        double expect;
    };
    std::vector<Case> cases{{Kernel::exponential(1.0, 2.0), exp_psi_integral(T - t)},
                            {Kernel::erlang(1.0, 2.0), erlang_psi_integral(T - t)}};
    int block = 0;
    for (const auto& c : cases) {
        Welford counts, comps;
        for (std::uint64_t r = 0; r < 20000; ++r) {
            auto s = simulate_shift(base, c.k, 1.0, nu, t,
                                    {9, derive_stream(static_cast<std::uint64_t>(block), r)});
            counts.add(static_cast<double>(s.hat_event_times.size()));
            comps.add(s.hat_compensator);
        }
        CHECK(std::fabs(counts.mean - c.expect) < 4.0 * counts.se_mean());
        // The compensator has the same mean as the count.
        CHECK(std::fabs(comps.mean - c.expect) < 4.0 * comps.se_mean() + 1e-12);
        ++block;
    }
}

TEST_CASE("terminal martingale is centered with variance theta^2 int psi") {
    const double T = 6.0, t = 1.0;
    auto base = dummy_base(T);
    Kernel k = Kernel::exponential(1.0, 2.0);
    auto nu = MarkDistribution::gaussian(0.5, 1.0);  // theta^2 = 1.25
    Welford w;
    for (std::uint64_t r = 0; r < 20000; ++r)
        w.add(simulate_shift(base, k, 1.0, nu, t, {10, r}).terminal_martingale);
    CHECK(std::fabs(w.mean) < 4.0 * w.se_mean());
    const double expect_var = 1.25 * exp_psi_integral(T - t);
    // Normal-theory proxy for the SE of a sample variance.
    CHECK(std::fabs(w.var() - expect_var) < 6.0 * std::sqrt(2.0 / w.n) * expect_var);
}

TEST_CASE("difference quotient of the statistic is (x + martingale)/sqrt(T)") {
    ShiftPath s;
    s.shift_time = 1.0;
    s.horizon = 9.0;
    s.terminal_martingale = 0.75;
    CHECK(malliavin_derivative(s, 2.0, 9.0) == doctest::Approx(2.75 / 3.0).epsilon(1e-15));
    CHECK(malliavin_derivative(s, -0.75, 9.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("joint shifts reproduce the marginal law of a single shift") {
    const double T = 8.0, t = 3.0;
    auto base = dummy_base(T);
    Kernel k = Kernel::exponential(1.0, 2.0);
    auto nu = MarkDistribution::two_point(-1.0, 2.0, 0.5);
    std::vector<double> grid{0.0, t, T};
    Welford joint, single;
    for (std::uint64_t r = 0; r < 15000; ++r) {
        auto js = simulate_joint_shifts(base, k, 1.0, nu, grid, {11, 2 * r});
        joint.add(js[1].terminal_martingale);
        single.add(simulate_shift(base, k, 1.0, nu, t, {11, 2 * r + 1}).terminal_martingale);
    }
    const double se = std::sqrt(joint.se_mean() * joint.se_mean() +
                                single.se_mean() * single.se_mean());
    CHECK(std::fabs(joint.mean - single.mean) < 4.0 * se);
    const double vj = joint.var(), vs = single.var();
    CHECK(std::fabs(vj - vs) < 4.0 * std::sqrt(2.0 / joint.n) * (vj + vs));
}

TEST_CASE("coupling integral is centered over the base randomness") {
    Kernel k = Kernel::exponential(1.0, 2.0);
    auto nu = MarkDistribution::point_mass_one();
    Welford w;
    for (std::uint64_t r = 0; r < 4000; ++r) {
        auto base = simulate_hawkes(k, 1.0, nu, 10.0, {12, 2 * r});
        w.add(lambda_hatM_integral(base, k, 1.0, nu, 16, {12, 2 * r + 1}));
    }
    // E[hat-M | base] = 0, so the integral has mean zero.
    CHECK(std::fabs(w.mean) < 4.0 * w.se_mean());
    CHECK_THROWS_AS(lambda_hatM_integral(dummy_base(1.0), k, 1.0, nu, 1, {12, 0}),
                    std::invalid_argument);
}

TEST_CASE("insertion into a shared driving measure adds exactly one cascade") {
    // Independent construction of the add-one-event coupling: realize the
    // driving Poisson measure on (0,T] x (0, cap) explicitly, thin it into a
    // base path, then re-thin the same atoms with one extra atom of height
    // zero inserted at the shift time. The accepted sets must be nested and
    // the mean number of extra events equals the integrated resolvent.
    const double alpha = 1.0, beta = 2.0, mu = 1.0, T = 2.0, t = 0.5;
    const double cap = 40.0;
    Welford extra;
    int skipped = 0;
    for (std::uint64_t r = 0; r < 20000; ++r) {
        Rng rng(77, r);
        std::vector<double> times, heights;
        double u = 0.0;
        while (true) {
            u += rng.exponential(cap);
            if (u > T) break;
            times.push_back(u);
            heights.push_back(cap * rng.uniform());
        }
        // Thin the atoms against an intensity fed by the accepted events;
        // `extra_at >= 0` inserts the deterministic atom at the shift time.
        auto run = [&](bool insert) {
            std::vector<char> accepted(times.size(), 0);
            double g = 0.0, prev = 0.0;  // g = lambda - mu, decays between events
            bool valid = true;
            std::size_t i = 0;
            bool pending_insert = insert;
            while (i < times.size() || pending_insert) {
                const bool take_insert =
                    pending_insert && (i >= times.size() || t < times[i]);
                const double u2 = take_insert ? t : times[i];
                g *= std::exp(-beta * (u2 - prev));
                prev = u2;
                if (take_insert) {
                    g += alpha;  // height zero is always accepted
                    pending_insert = false;
                    continue;
                }
                const double lambda = mu + g;
                if (lambda > cap) valid = false;
                if (heights[i] <= lambda) {
                    accepted[i] = 1;
                    g += alpha;
                }
                ++i;
            }
            return std::pair<std::vector<char>, bool>(std::move(accepted), valid);
        };
        auto [base_acc, ok1] = run(false);
        auto [shift_acc, ok2] = run(true);
        if (!ok1 || !ok2) {
            ++skipped;
            continue;
        }
        int added = 0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            CHECK(shift_acc[i] >= base_acc[i]);  // monotone nesting
            added += shift_acc[i] - base_acc[i];
        }
        extra.add(static_cast<double>(added));
    }
    CHECK(skipped == 0);
    CHECK(std::fabs(extra.mean - exp_psi_integral(T - t)) < 4.0 * extra.se_mean());
}

}  // TEST_SUITE
