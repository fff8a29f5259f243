#pragma once

// Plateau learning curve: expected fraction nonconforming as a function of an
// operator's cumulative weld count.

#include <cstdint>

namespace lcb {

// Coefficients of value(n) = steady_state + amplitude * n^(-exponent).
// The fitted production regime has amplitude < 0 and exponent < 0, i.e. a
// curve that decreases as experience accumulates.
struct PlateauParams {
    double steady_state = 0.0;
    double amplitude = 0.0;
    double exponent = 0.0;
};

// Output clipping for the raw curve, which is not confined to (0,1).
struct ClampPolicy {
    double epsilon = 1e-6;
};

struct ClampedValue {
    double value = 0.0;
    bool clamped = false;
};

// Raw model value, no clipping. Domain error for n < 1 or non-finite params.
double plateau_eval(const PlateauParams& params, std::int64_t n);

// Raw value clipped into [epsilon, 1-epsilon], with a flag telling whether
// the clip fired.
ClampedValue plateau_eval_clamped(const PlateauParams& params, std::int64_t n,
                                  const ClampPolicy& policy = {});

}  // namespace lcb
