#pragma once

// Synthetic cohort generation from known ground truth, plus the brute-force
// oracles (exhaustive grid likelihood search, Monte Carlo beta quantiles)
// that tests check the analytic implementations against.

#include <cstdint>
#include <span>
#include <vector>

#include "lcb/learning_curve.hpp"
#include "lcb/parallel.hpp"
#include "lcb/records.hpp"
#include "lcb/rng.hpp"
#include "lcb/stats.hpp"

namespace lcb {

class SynthConfig {
public:
    SynthConfig(PlateauParams truth, double sigma, int n_operators,
                std::int64_t n_min, std::int64_t n_max, std::uint64_t seed);

    PlateauParams truth;
    double sigma;
    int n_operators;
    std::int64_t n_min;
    std::int64_t n_max;
    std::uint64_t seed;
    ClampPolicy clamp;
};

// Each operator: n ~ UniformInt[n_min, n_max], p ~ Beta(mu/sigma,(1-mu)/sigma)
// with mu the clamped curve value at n, x ~ Binomial(n, p). Deterministic
// given the seed; operator ids are zero-padded "op####".
std::vector<OperatorRecord> generate_cohort(const SynthConfig& config);

struct GridSpec {
    std::vector<double> steady_state;
    std::vector<double> amplitude;
    std::vector<double> exponent;
    std::vector<double> sigma;
    std::size_t cell_budget = 1'000'000;
};

// Inclusive endpoints; count == 1 collapses to {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t count);

struct GridPoint {
    PlateauParams params;
    double sigma = 0.0;
    double neg_log_likelihood = 0.0;
    std::size_t cell_index = 0;
};

// Exhaustive argmin of the cohort negative log-likelihood over the Cartesian
// grid. Ties break toward the lowest linear cell index, so the winner does
// not depend on evaluation order or thread count. Throws GridTooLargeError
// above the cell budget.
GridPoint grid_likelihood_oracle(std::span<const OperatorRecord> records,
                                 const GridSpec& spec, const ClampPolicy& clamp = {},
                                 Exec exec = Exec::parallel);

// Empirical quantiles of n_draws beta samples (n_draws >= 1e5). Draws are
// generated on 64 fixed sub-streams seeded by child_seed(seed, k), so serial
// and parallel execution produce bit-identical results. The standard error of
// an empirical quantile is ~ sqrt(q(1-q)/n_draws) / pdf(quantile).
std::vector<double> mc_beta_quantiles(const BetaParams& p, std::span<const double> qs,
                                      std::int64_t n_draws, std::uint64_t seed,
                                      Exec exec = Exec::parallel);

namespace reference {

// Single serial scan, kept as the baseline for the parallel oracle.
GridPoint grid_likelihood_oracle(std::span<const OperatorRecord> records,
                                 const GridSpec& spec, const ClampPolicy& clamp = {});

}  // namespace reference

}  // namespace lcb
