#pragma once

// Conjugate Bayesian machinery: experience-based informative priors from a
// fitted learning curve, the Jeffreys noninformative baseline, and closed-form
// posterior updates with summaries.

#include <cstdint>
#include <optional>
#include <string>

#include "lcb/records.hpp"
#include "lcb/regression.hpp"
#include "lcb/stats.hpp"

namespace lcb {

// Prior for an operator with total weld count n: Beta(mu/sigma, (1-mu)/sigma)
// where mu is the clamped curve value at n and sigma the fitted dispersion.
BetaParams informative_prior(const RegressionFit& fit, std::int64_t n_total,
                             const ClampPolicy& clamp = {});

// Beta(1/2, 1/2).
BetaParams jeffreys_prior();

// Beta(x + a, n - x + b), exact arithmetic. n = 0 returns the prior.
BetaParams posterior_update(const BetaParams& prior, std::int64_t n, std::int64_t x);

class PriorScheme {
public:
    static PriorScheme informative(RegressionFit fit, ClampPolicy clamp = {});
    static PriorScheme noninformative();

    bool is_informative() const { return fit_.has_value(); }
    const RegressionFit& fit() const;

    // The prior this scheme assigns to an operator with the given experience.
    BetaParams prior_for(std::int64_t n_total) const;
    // Whether that prior's mean sat on a clamp boundary.
    bool prior_clamped(std::int64_t n_total) const;

private:
    PriorScheme() = default;
    std::optional<RegressionFit> fit_;
    ClampPolicy clamp_;
};

struct PosteriorSummary {
    std::string operator_id;
    BetaParams prior;
    BetaParams posterior;
    double posterior_mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double naive_fraction = 0.0;  // X / n
    bool mean_clamped = false;    // informative prior mean hit the clamp
};

// Prior, conjugate posterior, posterior mean and equal-tailed credible
// interval at the given level for one operator.
PosteriorSummary summarize(const OperatorRecord& record, const PriorScheme& scheme,
                           double level = 0.95);

}  // namespace lcb
