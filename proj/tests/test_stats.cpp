#include "lcb/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "lcb/rng.hpp"

using lcb::BetaParams;
using lcb::Rng;

TEST_SUITE_BEGIN("stats");

TEST_CASE("BetaParams rejects invalid shapes") {
    CHECK_THROWS_AS(BetaParams(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(BetaParams(1.0, -2.0), std::domain_error);
    CHECK_THROWS_AS(BetaParams(std::nan(""), 1.0), std::domain_error);
    CHECK_THROWS_AS(BetaParams(1.0, std::numeric_limits<double>::infinity()),
                    std::domain_error);
    const BetaParams p(2.0, 6.0);
    CHECK(p.mean() == doctest::Approx(0.25));
    CHECK(p.spread() == doctest::Approx(0.125));
}

TEST_CASE("mean/spread reparametrization round-trips") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const double mu = rng.uniform_open01();
        const double sigma = std::exp(rng.uniform01() * 8.0 - 4.0);
        const BetaParams p = BetaParams::from_mean_spread(mu, sigma);
        CHECK_ABS(p.mean(), mu, 1e-12);
        CHECK_CLOSE(p.spread(), sigma, 1e-12);
    }
    CHECK_THROWS_AS(BetaParams::from_mean_spread(0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(BetaParams::from_mean_spread(1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(BetaParams::from_mean_spread(0.5, 0.0), std::domain_error);
}

TEST_CASE("log_beta_fn matches arbitrary-precision references") {
    // Reference values computed with mpmath (50 digits).
    struct Pin {
        double a, b, expected;
    };
    const std::vector<Pin> pins = {
        {1e-3, 1e-3, 7.600900817008347378501},
        {1e-3, 0.5, 6.909139930809521959732},
        {1e-3, 1e6, 6.893363375325389470375},
        {0.5, 0.5, 1.144729885849400174143},
        {2.5, 3.75, -3.448105537923893099386},
        {29.172, 200.005, -88.05962848230116233431},
        {100.0, 100.0, -139.6652590867066392662},
        {1234.5, 0.002, 6.199220919674959370234},
        {1e6, 1e6, -1386300.003362921116326},
        {1e6, 2.5, -34.25409539943651610181},
        {7.25, 1e5, -76.41675072769813144574},
        {54.35, 0.9, -3.528697980908690478004},
        {3.0, 4.0, -4.09434456222210068483},
        {0.1, 0.1, 2.981361481037627337852},
        {1e5, 0.001, 6.895665964913891741374},
    };
    for (const auto& pin : pins) {
        CAPTURE(pin.a);
        CAPTURE(pin.b);
        CHECK_CLOSE(lcb::log_beta_fn(pin.a, pin.b), pin.expected, 1e-10);
    }
    CHECK_ABS(lcb::log_beta_fn(1.0, 1.0), 0.0, 1e-13);  // B(1,1) = 1
    CHECK_CLOSE(lcb::log_beta_fn(0.5, 0.5), std::log(M_PI), 1e-13);
}

TEST_CASE("log_beta_fn is exactly symmetric and rejects bad input") {
    Rng rng(12);
    for (int i = 0; i < 300; ++i) {
        const double a = std::exp(rng.uniform01() * 20.0 - 7.0);
        const double b = std::exp(rng.uniform01() * 20.0 - 7.0);
        CHECK(lcb::log_beta_fn(a, b) == lcb::log_beta_fn(b, a));
    }
    CHECK_THROWS_AS(lcb::log_beta_fn(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(lcb::log_beta_fn(1.0, std::nan("")), std::domain_error);
}

TEST_CASE("beta_mean worked values") {
    CHECK_ABS(lcb::beta_mean(BetaParams(29.172, 200.005)), 0.127, 0.0005);
    CHECK(lcb::beta_mean(BetaParams(1, 1)) == 0.5);
    CHECK_ABS(lcb::beta_mean(BetaParams(15.966, 149.211)), 0.097, 0.0005);
}

TEST_CASE("beta_cdf closed forms and pinned values") {
    for (double a : {0.3, 1.0, 4.5, 80.0}) {
        CHECK_ABS(lcb::beta_cdf(0.5, BetaParams(a, a)), 0.5, 1e-12);
    }
    CHECK_ABS(lcb::beta_cdf(0.3, BetaParams(1, 1)), 0.3, 1e-14);
    CHECK_ABS(lcb::beta_cdf(0.5, BetaParams(2, 1)), 0.25, 1e-14);
    CHECK(lcb::beta_cdf(0.0, BetaParams(2, 3)) == 0.0);
    CHECK(lcb::beta_cdf(1.0, BetaParams(2, 3)) == 1.0);

    // mpmath pins
    CHECK_CLOSE(lcb::beta_cdf(0.127, BetaParams(29.172, 200.005)),
                0.5144114930024004839722, 1e-12);
    CHECK_CLOSE(lcb::beta_cdf(0.2, BetaParams(0.5, 5.0)), 0.8550723945959195799069, 1e-12);
    CHECK_CLOSE(lcb::beta_cdf(0.9, BetaParams(5.0, 0.5)), 0.3166429150200122558136, 1e-12);

    CHECK_THROWS_AS(lcb::beta_cdf(-0.1, BetaParams(1, 1)), std::domain_error);
    CHECK_THROWS_AS(lcb::beta_cdf(1.1, BetaParams(1, 1)), std::domain_error);
}

TEST_CASE("beta_cdf symmetry identity") {
    Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        const double a = std::exp(rng.uniform01() * 9.2 - 2.3);  // [0.1, ~100]
        const double b = std::exp(rng.uniform01() * 9.2 - 2.3);
        const double x = rng.uniform_open01();
        const double sum = lcb::beta_cdf(x, BetaParams(a, b))
                         + lcb::beta_cdf(1.0 - x, BetaParams(b, a));
        CHECK_ABS(sum, 1.0, 1e-10);
    }
}

TEST_CASE("beta_quantile closed forms") {
    CHECK_ABS(lcb::beta_quantile(0.5, BetaParams(1, 1)), 0.5, 1e-10);
    CHECK_ABS(lcb::beta_quantile(0.975, BetaParams(1, 1)), 0.975, 1e-10);
    for (double q : {0.025, 0.31, 0.5, 0.94}) {
        // Beta(2,1) has cdf x^2
        CHECK_ABS(lcb::beta_quantile(q, BetaParams(2, 1)), std::sqrt(q), 1e-9);
        // arcsine law
        const double s = std::sin(q * M_PI / 2.0);
        CHECK_ABS(lcb::beta_quantile(q, BetaParams(0.5, 0.5)), s * s, 1e-9);
    }
    CHECK_THROWS_AS(lcb::beta_quantile(0.0, BetaParams(1, 1)), std::domain_error);
    CHECK_THROWS_AS(lcb::beta_quantile(1.0, BetaParams(1, 1)), std::domain_error);
}

TEST_CASE("beta_quantile pinned values for the Table 2 posterior") {
    // mpmath bisection on the regularized incomplete beta, 50 digits.
    const BetaParams post(29.172, 200.005);
    CHECK_ABS(lcb::beta_quantile(0.025, post), 0.08743047089849590861465, 1e-9);
    CHECK_ABS(lcb::beta_quantile(0.5, post), 0.1262056082834850351015, 1e-9);
    CHECK_ABS(lcb::beta_quantile(0.975, post), 0.173303043561412699399, 1e-9);
}

TEST_CASE("quantile/cdf inversion across random shapes") {
    Rng rng(14);
    const double levels[] = {0.01, 0.025, 0.5, 0.975, 0.99};
    for (int i = 0; i < 60; ++i) {
        const double a = std::exp(rng.uniform01() * 6.9 - 2.3);
        const double b = std::exp(rng.uniform01() * 6.9 - 2.3);
        const BetaParams p(a, b);
        for (double q : levels) {
            CAPTURE(a);
            CAPTURE(b);
            CAPTURE(q);
            const double x = lcb::beta_quantile(q, p);
            CHECK_ABS(lcb::beta_cdf(x, p), q, 1e-9);
        }
    }
}

TEST_CASE("betabinom_log_pmf closed forms and pinned value") {
    Rng rng(15);
    for (int i = 0; i < 100; ++i) {
        const double a = std::exp(rng.uniform01() * 6.9 - 2.3);
        const double b = std::exp(rng.uniform01() * 6.9 - 2.3);
        // single trial success probability is the prior mean
        CHECK_CLOSE(lcb::betabinom_log_pmf(1, 1, BetaParams(a, b)),
                    std::log(a / (a + b)), 1e-12);
    }
    // uniform prior makes x uniform on {0,1,2}
    CHECK_CLOSE(lcb::betabinom_log_pmf(1, 2, BetaParams(1, 1)), std::log(1.0 / 3.0), 1e-13);
    // mpmath direct evaluation
    CHECK_CLOSE(lcb::betabinom_log_pmf(9, 208, BetaParams(4, 50)),
                -3.013655573781423017175, 1e-11);

    // extended-precision direct summation of the same formula
    const long double a = 4.0L, b = 50.0L;
    const long double direct = lgammal(209.0L) - lgammal(10.0L) - lgammal(200.0L)
        + (lgammal(9 + a) + lgammal(208 - 9 + b) - lgammal(208 + a + b))
        - (lgammal(a) + lgammal(b) - lgammal(a + b));
    CHECK_CLOSE(lcb::betabinom_log_pmf(9, 208, BetaParams(4, 50)),
                static_cast<double>(direct), 1e-12);

    CHECK_THROWS_AS(lcb::betabinom_log_pmf(3, 2, BetaParams(1, 1)), std::domain_error);
    CHECK_THROWS_AS(lcb::betabinom_log_pmf(-1, 2, BetaParams(1, 1)), std::domain_error);
    CHECK_THROWS_AS(lcb::betabinom_log_pmf(0, 0, BetaParams(1, 1)), std::domain_error);
}

TEST_CASE("betabinom pmf normalizes over its support") {
    Rng rng(16);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = 0.1 + rng.uniform01() * 99.9;
        const double b = 0.1 + rng.uniform01() * 99.9;
        const std::int64_t n = rng.uniform_int(1, 60);
        const BetaParams p(a, b);
        double sum = 0.0;
        for (std::int64_t x = 0; x <= n; ++x) {
            sum += std::exp(lcb::betabinom_log_pmf(x, n, p));
        }
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(n);
        CHECK_ABS(sum, 1.0, 1e-9);
    }
}

TEST_SUITE_END();
