#include "lcb/learning_curve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lcb {

double plateau_eval(const PlateauParams& params, std::int64_t n) {
    if (!std::isfinite(params.steady_state) || !std::isfinite(params.amplitude)
        || !std::isfinite(params.exponent)) {
        throw std::domain_error("plateau_eval: coefficients must be finite");
    }
    if (n < 1) {
        throw std::domain_error("plateau_eval: weld count must be >= 1, got "
                                + std::to_string(n));
    }
    if (params.amplitude == 0.0) return params.steady_state;
    return params.steady_state
         + params.amplitude * std::pow(static_cast<double>(n), -params.exponent);
}

ClampedValue plateau_eval_clamped(const PlateauParams& params, std::int64_t n,
                                  const ClampPolicy& policy) {
    if (!(policy.epsilon > 0.0 && policy.epsilon < 0.5)) {
        throw std::domain_error("clamp epsilon must lie in (0, 0.5), got "
                                + std::to_string(policy.epsilon));
    }
    const double raw = plateau_eval(params, n);
    const double lo = policy.epsilon;
    const double hi = 1.0 - policy.epsilon;
    if (raw < lo) return {lo, true};
    if (raw > hi) return {hi, true};
    return {raw, false};
}

}  // namespace lcb
