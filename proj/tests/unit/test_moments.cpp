#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hawkes/kernel.hpp"
#include "hawkes/marks.hpp"
#include "hawkes/moments.hpp"

using namespace hawkes;

namespace {

template <typename F>
double simpson(F f, double a, double b, int panels) {
    const double h = (b - a) / (2.0 * panels);
    double acc = f(a) + f(b);
    for (int j = 1; j < 2 * panels; ++j) acc += (j % 2 == 1 ? 4.0 : 2.0) * f(a + h * j);
    return acc * h / 3.0;
}

// Independent oracle: E[H_t] = mu t + mu \int_0^t psi(s)(t-s) ds.
double renewal_count_oracle(const Kernel& k, double mu, double t) {
    return mu * t + mu * simpson([&](double s) { return k.psi(s) * (t - s); }, 0.0, t, 2000);
}

double det3(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

TEST_SUITE("moments") {

TEST_CASE("expected count closed forms") {
    Kernel exp_k = Kernel::exponential(1.0, 2.0);
    CHECK(expected_count(Kernel::zero(), 1.0, 7.0) == doctest::Approx(7.0).epsilon(1e-15));
    // 2t - 1 + e^{-t} at t = 1.
    CHECK(expected_count(exp_k, 1.0, 1.0) ==
          doctest::Approx(1.0 + std::exp(-1.0)).epsilon(1e-14));
    // Long-run rate sigma^2 = mu/(1-||Phi||_1) = 2.
    CHECK(expected_count(exp_k, 1.0, 5000.0) / 5000.0 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("expected count matches the renewal-formula quadrature oracle") {
    for (const Kernel& k : {Kernel::exponential(1.0, 2.0), Kernel::erlang(1.0, 2.0),
                            Kernel::erlang(3.0, 2.0)}) {
        for (double t : {0.5, 2.0, 7.0})
            CHECK(expected_count(k, 1.3, t) ==
                  doctest::Approx(renewal_count_oracle(k, 1.3, t)).epsilon(1e-8));
    }
    Kernel tab = Kernel::tabulated({0.0, 1.0, 2.0}, {0.0, 0.6, 0.0});
    for (double t : {0.5, 2.0, 7.0})
        CHECK(expected_count(tab, 1.0, t) ==
              doctest::Approx(renewal_count_oracle(tab, 1.0, t)).epsilon(1e-4));
}

TEST_CASE("expected intensity is mu (1 + integral of psi)") {
    for (const Kernel& k : {Kernel::exponential(1.0, 2.0), Kernel::erlang(1.0, 2.0)}) {
        for (double t : {0.5, 2.0, 7.0}) {
            const double oracle =
                2.0 * (1.0 + simpson([&](double s) { return k.psi(s); }, 0.0, t, 2000));
            CHECK(expected_intensity(k, 2.0, t) == doctest::Approx(oracle).epsilon(1e-9));
        }
    }
}

TEST_CASE("erlang auxiliary mean satisfies the first-moment system") {
    Kernel k = Kernel::erlang(1.0, 2.0);
    const double mu = 1.5, beta = 2.0;
    for (double t : {0.5, 2.0, 5.0}) {
        // d/dt E[lambda] = E[xi] + beta (mu - E[lambda]), central difference.
        const double h = 1e-5;
        const double deriv =
            (expected_intensity(k, mu, t + h) - expected_intensity(k, mu, t - h)) / (2.0 * h);
        const double rhs =
            expected_erlang_xi(k, mu, t) + beta * (mu - expected_intensity(k, mu, t));
        CHECK(deriv == doctest::Approx(rhs).epsilon(1e-5));
    }
    CHECK_THROWS_AS(expected_erlang_xi(Kernel::exponential(1.0, 2.0), 1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("asymptotic constants") {
    auto nu = MarkDistribution::point_mass_one();
    auto c = asymptotic_constants(Kernel::exponential(1.0, 2.0), 1.0, nu);
    CHECK(c.sigma2 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c.sigma2_tilde == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(c.gamma == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c.limit_variance == doctest::Approx(2.0).epsilon(1e-15));

    auto ce = asymptotic_constants(Kernel::erlang(1.0, 2.0), 1.0, nu);
    CHECK(ce.sigma2 == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(ce.sigma2_tilde == doctest::Approx(64.0 / 27.0).epsilon(1e-14));
    CHECK(ce.gamma == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

    auto two = MarkDistribution::two_point(-1.0, 2.0, 0.5);
    auto c2 = asymptotic_constants(Kernel::exponential(1.0, 2.0), 1.0, two);
    CHECK(c2.limit_variance == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("exponential second moment reaches the stationary fixed point") {
    Kernel k = Kernel::exponential(1.0, 2.0);
    std::vector<double> grid{0.0, 1.0, 20.0};
    auto reports = second_moment_ode(k, 1.0, grid);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].second_moment_intensity == doctest::Approx(1.0).epsilon(1e-12));
    // Stationary solution of d E[lambda^2]/dt = -2 E[lambda^2] + 5 E[lambda]
    // with E[lambda] -> 2 is 5.
    CHECK(reports[2].second_moment_intensity == doctest::Approx(5.0).epsilon(1e-6));
    for (const auto& r : reports) {
        CHECK(r.mean_intensity >= 1.0 - 1e-12);
        CHECK(r.second_moment_intensity >=
              r.mean_intensity * r.mean_intensity - 1e-9);  // Jensen
    }
    CHECK(reports[0].mean_count <= reports[1].mean_count);
    CHECK(reports[1].mean_count <= reports[2].mean_count);
}

TEST_CASE("erlang second-moment drift matrix has the expected spectrum") {
    // For alpha=1, beta=2 the eigenvalues are -2b and -2b +- 2 sqrt(a),
    // i.e. {-4, -2, -6}.
    auto A = erlang_second_moment_matrix(1.0, 2.0);
    for (double v : {-4.0, -2.0, -6.0}) {
        auto shifted = A;
        for (int i = 0; i < 3; ++i) shifted[i][i] -= v;
        CHECK(std::fabs(det3(shifted)) < 1e-10);
    }
}

TEST_CASE("erlang second moments converge to the stationary linear system") {
    const double alpha = 1.0, beta = 2.0, mu = 1.0;
    Kernel k = Kernel::erlang(alpha, beta);
    std::vector<double> grid{30.0};
    auto r = second_moment_ode(k, mu, grid).front();
    // Stationary first moments: E[lambda] = mu/(1-||Phi||_1), E[xi] =
    // alpha E[lambda]/beta.
    const double el = mu / (1.0 - alpha / (beta * beta));
    const double ex = alpha * el / beta;
    CHECK(r.mean_intensity == doctest::Approx(el).epsilon(1e-9));
    CHECK(r.aux_mean == doctest::Approx(ex).epsilon(1e-9));
    // Stationary second moments solve A y = -source via Cramer's rule.
    auto A = erlang_second_moment_matrix(alpha, beta);
    const std::array<double, 3> b{-2.0 * beta * mu * el, -alpha * alpha * el, -beta * mu * ex};
    const double d = det3(A);
    auto col = [&](int j) {
        auto m = A;
        for (int i = 0; i < 3; ++i) m[i][j] = b[i];
        return det3(m) / d;
    };
    CHECK(r.second_moment_intensity == doctest::Approx(col(0)).epsilon(1e-8));
    CHECK(r.aux_second_moment == doctest::Approx(col(1)).epsilon(1e-8));
    CHECK(r.cross_moment == doctest::Approx(col(2)).epsilon(1e-8));
}

TEST_CASE("ode rejects unsupported kernels and bad grids") {
    std::vector<double> grid{1.0};
    CHECK_THROWS_AS(second_moment_ode(Kernel::zero(), 1.0, grid), std::invalid_argument);
    std::vector<double> bad{2.0, 1.0};
    CHECK_THROWS_AS(second_moment_ode(Kernel::exponential(1.0, 2.0), 1.0, bad),
                    std::invalid_argument);
}

}  // TEST_SUITE
