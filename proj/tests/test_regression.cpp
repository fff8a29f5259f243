#include "lcb/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "lcb/errors.hpp"
#include "lcb/rng.hpp"
#include "lcb/synth.hpp"

using lcb::ClampPolicy;
using lcb::Exec;
using lcb::FitConfig;
using lcb::neg_log_likelihood;
using lcb::OperatorRecord;
using lcb::PlateauParams;
using lcb::RegressionFit;

namespace {

const PlateauParams kPaperCurve{0.149, -0.00544, -0.5};
constexpr double kPaperSigma = 0.0184;

// Fixed synthetic tallies; the expected likelihood below was evaluated for
// exactly these pairs with mpmath at 50 digits.
const std::vector<std::pair<int, int>> kFixture57 = {
    {281, 15}, {143, 7},  {382, 7},  {149, 9},  {381, 32}, {98, 8},   {355, 20},
    {323, 8},  {334, 10}, {38, 3},   {64, 3},   {356, 7},  {411, 28}, {258, 7},
    {280, 13}, {83, 3},   {436, 6},  {454, 15}, {166, 9},  {406, 13}, {198, 14},
    {443, 4},  {436, 19}, {79, 15},  {492, 6},  {292, 21}, {152, 15}, {160, 8},
    {246, 24}, {463, 13}, {142, 8},  {305, 9},  {417, 11}, {70, 6},   {163, 22},
    {295, 12}, {108, 4},  {335, 40}, {225, 12}, {235, 11}, {252, 12}, {94, 5},
    {232, 8},  {362, 2},  {300, 14}, {328, 31}, {426, 2},  {453, 14}, {337, 13},
    {148, 22}, {245, 15}, {465, 4},  {491, 19}, {381, 24}, {126, 7},  {448, 6},
    {124, 22},
};

std::vector<OperatorRecord> fixture_records() {
    std::vector<OperatorRecord> records;
    int id = 0;
    for (const auto& [n, x] : kFixture57) {
        records.push_back({"w" + std::to_string(++id), n, x});
    }
    return records;
}

}  // namespace

TEST_SUITE_BEGIN("regression");

TEST_CASE("single-trial likelihood depends only on the mean") {
    const std::vector<OperatorRecord> one = {{"a", 1, 1}};
    const PlateauParams mu03{0.3, 0.0, 1.0};
    for (double sigma : {0.01, 0.3, 1.0}) {
        CHECK_CLOSE(neg_log_likelihood(one, mu03, sigma), -std::log(0.3), 1e-12);
    }
}

TEST_CASE("two-trial likelihood at mu = 1/2") {
    const std::vector<OperatorRecord> one = {{"a", 2, 1}};
    const PlateauParams mu05{0.5, 0.0, 1.0};
    // sigma = 1 gives shapes (1/2, 1/2); the pmf evaluates to 1/4 (pinned by
    // direct summation, see the oracle notes)
    CHECK_CLOSE(neg_log_likelihood(one, mu05, 1.0), std::log(4.0), 1e-12);
    // sigma = 1/2 gives the uniform prior (1,1) and the uniform marginal 1/3
    CHECK_CLOSE(neg_log_likelihood(one, mu05, 0.5), std::log(3.0), 1e-12);
}

TEST_CASE("57-record cohort matches the arbitrary-precision summation") {
    const auto records = fixture_records();
    const double nll = neg_log_likelihood(records, kPaperCurve, kPaperSigma);
    CHECK_CLOSE(nll, 186.5981673983582958061, 1e-10);
    // plain serial reference agrees with the blocked kernel
    const double ref = lcb::reference::neg_log_likelihood(records, kPaperCurve, kPaperSigma);
    CHECK_CLOSE(nll, ref, 1e-12);
    // execution mode never changes the blocked result
    CHECK(neg_log_likelihood(records, kPaperCurve, kPaperSigma, {}, Exec::serial)
          == neg_log_likelihood(records, kPaperCurve, kPaperSigma, {}, Exec::parallel));
}

TEST_CASE("likelihood input validation") {
    const std::vector<OperatorRecord> none;
    CHECK_THROWS_AS(neg_log_likelihood(none, kPaperCurve, 0.02), std::domain_error);
    const std::vector<OperatorRecord> one = {{"a", 10, 2}};
    CHECK_THROWS_AS(neg_log_likelihood(one, kPaperCurve, 0.0), std::domain_error);
    CHECK_THROWS_AS(neg_log_likelihood(one, kPaperCurve, -1.0), std::domain_error);
    const std::vector<OperatorRecord> bad = {{"a", 10, 11}};
    CHECK_THROWS_AS(neg_log_likelihood(bad, kPaperCurve, 0.02), std::domain_error);
}

TEST_CASE("shuffled record order leaves the likelihood put") {
    auto records = fixture_records();
    const double base = neg_log_likelihood(records, kPaperCurve, kPaperSigma);
    lcb::Rng rng(99);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
        for (std::size_t i = records.size(); i > 1; --i) {
            std::swap(records[i - 1],
                      records[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
        }
        CHECK_CLOSE(neg_log_likelihood(records, kPaperCurve, kPaperSigma), base, 1e-12);
    }
}

TEST_CASE("fit rejects cohorts it cannot identify") {
    std::vector<OperatorRecord> three = {{"a", 10, 1}, {"b", 20, 2}, {"c", 30, 3}};
    CHECK_THROWS_AS(lcb::fit(three), lcb::InsufficientDataError);
    std::vector<OperatorRecord> same_n = {
        {"a", 50, 1}, {"b", 50, 2}, {"c", 50, 3}, {"d", 50, 4}, {"e", 50, 5}};
    CHECK_THROWS_AS(lcb::fit(same_n), lcb::InsufficientDataError);
}

TEST_CASE("fit is deterministic and permutation-invariant") {
    const lcb::SynthConfig config(kPaperCurve, kPaperSigma, 40, 20, 400, 7);
    auto records = lcb::generate_cohort(config);
    FitConfig fc;
    fc.seed = 7;
    const RegressionFit first = lcb::fit(records, fc);
    const RegressionFit second = lcb::fit(records, fc);
    CHECK(first.params.steady_state == second.params.steady_state);
    CHECK(first.params.amplitude == second.params.amplitude);
    CHECK(first.params.exponent == second.params.exponent);
    CHECK(first.sigma == second.sigma);
    CHECK(first.log_likelihood == second.log_likelihood);
    CHECK(first.iterations == second.iterations);

    std::reverse(records.begin(), records.end());
    const RegressionFit reversed = lcb::fit(records, fc);
    CHECK(first.params.steady_state == reversed.params.steady_state);
    CHECK(first.params.amplitude == reversed.params.amplitude);
    CHECK(first.params.exponent == reversed.params.exponent);
    CHECK(first.sigma == reversed.sigma);
}

TEST_CASE("fit result beats every documented start") {
    const lcb::SynthConfig config(kPaperCurve, kPaperSigma, 40, 20, 400, 11);
    const auto records = lcb::generate_cohort(config);
    FitConfig fc;
    const RegressionFit fitted = lcb::fit(records, fc);
    CHECK(fitted.converged);
    CHECK(std::isfinite(fitted.log_likelihood));
    CHECK(fitted.n_restarts_used == fc.n_restarts);

    double pooled_x = 0.0, pooled_n = 0.0;
    for (const auto& r : records) {
        pooled_x += static_cast<double>(r.x_repaired);
        pooled_n += static_cast<double>(r.n_total);
    }
    const double steady0 = pooled_x / pooled_n;
    for (double amp0 : {-0.01, 0.01, -0.1, 0.1}) {
        for (double exp0 : {-0.5, 0.5, -1.0, 1.0}) {
            const double at_start =
                neg_log_likelihood(records, PlateauParams{steady0, amp0, exp0}, 0.02);
            CHECK(-fitted.log_likelihood <= at_start);
        }
    }
}

TEST_CASE("fitted point is stationary or sits on a clamp boundary") {
    const lcb::SynthConfig config(kPaperCurve, kPaperSigma, 60, 20, 400, 13);
    const auto records = lcb::generate_cohort(config);
    const RegressionFit fitted = lcb::fit(records);
    REQUIRE(fitted.converged);

    if (fitted.clamp_fraction == 0.0) {
        // central differences on scaled coordinates
        const double scales[4] = {0.1, 0.01, 0.5, 1.0};
        const double theta[4] = {fitted.params.steady_state, fitted.params.amplitude,
                                 fitted.params.exponent, std::log(fitted.sigma)};
        const auto eval = [&](const double* t) {
            return neg_log_likelihood(records, PlateauParams{t[0], t[1], t[2]},
                                      std::exp(t[3]));
        };
        const double step = 1e-4;
        for (int j = 0; j < 4; ++j) {
            double hi[4], lo[4];
            std::copy(theta, theta + 4, hi);
            std::copy(theta, theta + 4, lo);
            hi[j] += step * scales[j];
            lo[j] -= step * scales[j];
            const double partial = (eval(hi) - eval(lo)) / (2.0 * step);
            CAPTURE(j);
            CHECK(std::fabs(partial) < 1e-3);
        }
    } else {
        CHECK(fitted.clamp_fraction > 0.0);
    }
}

TEST_CASE("fitted_curve_table") {
    RegressionFit fit;
    fit.params = kPaperCurve;
    fit.sigma = kPaperSigma;

    auto table = lcb::fitted_curve_table(fit, {175, 111});
    REQUIRE(table.size() == 2);
    CHECK(table[0].n == 111);  // sorted ascending
    CHECK_ABS(table[0].mu_fn, 0.092, 0.0005);
    CHECK(table[1].n == 175);
    CHECK_ABS(table[1].mu_fn, 0.077, 0.0005);
    CHECK_FALSE(table[0].clamped);

    const auto clamped = lcb::fitted_curve_table(fit, {10000});
    REQUIRE(clamped.size() == 1);
    CHECK(clamped[0].mu_fn == 1e-6);
    CHECK(clamped[0].clamped);

    RegressionFit flat;
    flat.params = PlateauParams{0.2, 0.0, 1.0};
    flat.sigma = 0.02;
    for (const auto& point : lcb::fitted_curve_table(flat, {5, 50, 500})) {
        CHECK(point.mu_fn == 0.2);
    }
}

TEST_SUITE_END();
