#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "hawkes/rng.hpp"

using namespace hawkes;

TEST_SUITE("rng") {

TEST_CASE("same seed and stream reproduce the identical sequence") {
    Rng a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams give distinct sequences") {
    Rng a(42, 7), b(42, 8), c(43, 7);
    int diff_ab = 0, diff_ac = 0;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u64();
        if (x != b.next_u64()) ++diff_ab;
        if (x != c.next_u64()) ++diff_ac;
    }
    CHECK(diff_ab == 64);
    CHECK(diff_ac == 64);
}

TEST_CASE("uniform lies in the open unit interval with mean 1/2") {
    Rng r(1, 0);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double se = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::fabs(sum / n - 0.5) < 4.0 * se);
}

TEST_CASE("exponential waiting times have the requested rate") {
    Rng r(2, 0);
    const int n = 100000;
    const double rate = 2.5;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += r.exponential(rate);
    const double se = (1.0 / rate) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(sum / n - 1.0 / rate) < 4.0 * se);
}

TEST_CASE("normal draws have unit variance and zero mean") {
    Rng r(3, 0);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    // Var of the variance estimator is 2/n for Gaussians.
    CHECK(std::fabs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("normal quantile hits reference values and inverts the cdf") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
    for (double x : {-3.0, -1.2, -0.1, 0.0, 0.4, 1.7, 2.9})
        CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
}

TEST_CASE("normal cdf and pdf reference values") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
}

TEST_CASE("stream derivation keeps replications and grid points disjoint") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t block : {0ULL, 1ULL, 5ULL})
        for (std::uint64_t r = 0; r < 20; ++r)
            for (std::uint64_t k = 0; k < 20; ++k)
                CHECK(seen.insert(derive_stream(block, r, k)).second);
}

}  // TEST_SUITE
