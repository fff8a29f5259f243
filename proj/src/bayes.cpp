#include "lcb/bayes.hpp"

#include <stdexcept>

#include "lcb/learning_curve.hpp"

namespace lcb {

BetaParams informative_prior(const RegressionFit& fit, std::int64_t n_total,
                             const ClampPolicy& clamp) {
    const double mu = plateau_eval_clamped(fit.params, n_total, clamp).value;
    return BetaParams::from_mean_spread(mu, fit.sigma);
}

BetaParams jeffreys_prior() {
    return BetaParams(0.5, 0.5);
}

BetaParams posterior_update(const BetaParams& prior, std::int64_t n, std::int64_t x) {
    if (n < 0 || x < 0 || x > n) {
        throw std::domain_error("posterior_update requires 0 <= x <= n");
    }
    return BetaParams(prior.a() + static_cast<double>(x),
                      prior.b() + static_cast<double>(n - x));
}

PriorScheme PriorScheme::informative(RegressionFit fit, ClampPolicy clamp) {
    PriorScheme scheme;
    scheme.fit_ = std::move(fit);
    scheme.clamp_ = clamp;
    return scheme;
}

PriorScheme PriorScheme::noninformative() {
    return PriorScheme{};
}

const RegressionFit& PriorScheme::fit() const {
    if (!fit_) throw std::logic_error("noninformative scheme carries no fit");
    return *fit_;
}

BetaParams PriorScheme::prior_for(std::int64_t n_total) const {
    if (fit_) return informative_prior(*fit_, n_total, clamp_);
    return jeffreys_prior();
}

bool PriorScheme::prior_clamped(std::int64_t n_total) const {
    if (!fit_) return false;
    return plateau_eval_clamped(fit_->params, n_total, clamp_).clamped;
}

PosteriorSummary summarize(const OperatorRecord& record, const PriorScheme& scheme,
                           double level) {
    validate_record(record);
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("credible level must lie in (0,1), got "
                                + std::to_string(level));
    }
    const BetaParams prior = scheme.prior_for(record.n_total);
    const BetaParams posterior = posterior_update(prior, record.n_total, record.x_repaired);
    const double tail = (1.0 - level) / 2.0;
    return PosteriorSummary{
        record.operator_id,
        prior,
        posterior,
        beta_mean(posterior),
        beta_quantile(tail, posterior),
        beta_quantile(1.0 - tail, posterior),
        static_cast<double>(record.x_repaired) / static_cast<double>(record.n_total),
        scheme.prior_clamped(record.n_total),
    };
}

}  // namespace lcb
