#pragma once

// Beta-binomial maximum-likelihood fit of the Plateau curve: counts are
// x_i ~ BetaBinomial(n_i, mu_i/sigma, (1-mu_i)/sigma) with mu_i the clamped
// curve value at n_i and one dispersion sigma shared by the whole cohort.

#include <cstdint>
#include <span>
#include <vector>

#include "lcb/learning_curve.hpp"
#include "lcb/parallel.hpp"
#include "lcb/records.hpp"

namespace lcb {

struct RegressionFit {
    PlateauParams params;
    double sigma = 0.0;
    double log_likelihood = 0.0;
    bool converged = false;
    int iterations = 0;
    int n_restarts_used = 0;
    // Share of cohort operators whose fitted mean sat on a clamp boundary.
    double clamp_fraction = 0.0;
};

struct FitConfig {
    int max_iterations = 2000;
    double tolerance = 1e-9;  // on the simplex log-likelihood spread
    int n_restarts = 8;
    std::uint64_t seed = 0;
    ClampPolicy clamp;
};

// Negative beta-binomial log-likelihood of the cohort at the given curve and
// dispersion. Deterministic blocked summation; thread count never changes the
// result.
double neg_log_likelihood(std::span<const OperatorRecord> records,
                          const PlateauParams& params, double sigma,
                          const ClampPolicy& clamp = {},
                          Exec exec = Exec::parallel);

// Multi-start Nelder-Mead over (steady_state, amplitude, exponent, ln sigma).
// Restart initial points cross amplitude {+-0.01, +-0.1} with exponent
// {+-0.5, +-1}; restarts beyond the 16 crossed combinations add seeded
// jitter. Ties between restarts break toward the lowest restart index, and
// the winner gets one polish run, so the result is a deterministic function
// of (records, config). Throws InsufficientDataError for fewer than 4
// records or fewer than 2 distinct weld counts; a fit where every restart
// exhausted its iteration budget is returned with converged = false.
RegressionFit fit(std::span<const OperatorRecord> records, const FitConfig& config = {});

struct CurvePoint {
    std::int64_t n = 0;
    double mu_fn = 0.0;
    bool clamped = false;
};

// Clamped curve values on the given grid, sorted ascending by n.
std::vector<CurvePoint> fitted_curve_table(const RegressionFit& fit,
                                           std::vector<std::int64_t> n_grid);

namespace reference {

// Plain left-to-right accumulation, kept as the serial baseline the blocked
// kernel is tested and benchmarked against.
double neg_log_likelihood(std::span<const OperatorRecord> records,
                          const PlateauParams& params, double sigma,
                          const ClampPolicy& clamp = {});

}  // namespace reference

}  // namespace lcb
