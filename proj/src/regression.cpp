#include "lcb/regression.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lcb/errors.hpp"
#include "lcb/rng.hpp"
#include "lcb/stats.hpp"

namespace lcb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Log pmf of one record under the curve; NaN when the shapes degenerate
// (e.g. sigma driven so large that mu/sigma underflows).
double record_log_pmf(const OperatorRecord& r, const PlateauParams& params,
                      double sigma, const ClampPolicy& clamp) {
    const double mu = plateau_eval_clamped(params, r.n_total, clamp).value;
    const double a = mu / sigma;
    const double b = (1.0 - mu) / sigma;
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return betabinom_log_pmf(r.x_repaired, r.n_total, BetaParams(a, b));
}

void validate_likelihood_inputs(std::span<const OperatorRecord> records, double sigma) {
    if (records.empty()) {
        throw std::domain_error("neg_log_likelihood: record list is empty");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::domain_error("neg_log_likelihood: sigma must be positive and finite");
    }
    for (const auto& r : records) validate_record(r);
}

// ---------------------------------------------------------------------------
// Nelder-Mead over theta = (steady_state, amplitude, exponent, ln sigma)

constexpr int kDim = 4;
using Point = std::array<double, kDim>;

struct NmOutcome {
    Point x{};
    double f = kInf;
    int iterations = 0;
    bool converged = false;
};

template <typename Objective>
NmOutcome nelder_mead(const Objective& objective, const Point& start,
                      const Point& steps, int max_iterations, double tolerance) {
    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;

    std::array<Point, kDim + 1> vertex;
    std::array<double, kDim + 1> value;
    vertex[0] = start;
    for (int j = 0; j < kDim; ++j) {
        vertex[j + 1] = start;
        vertex[j + 1][j] += steps[j];
    }
    for (int v = 0; v <= kDim; ++v) value[v] = objective(vertex[v]);

    auto order = [&] {
        std::array<int, kDim + 1> idx;
        for (int v = 0; v <= kDim; ++v) idx[v] = v;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int l, int r) { return value[l] < value[r]; });
        std::array<Point, kDim + 1> vx;
        std::array<double, kDim + 1> vf;
        for (int v = 0; v <= kDim; ++v) {
            vx[v] = vertex[idx[v]];
            vf[v] = value[idx[v]];
        }
        vertex = vx;
        value = vf;
    };

    NmOutcome out;
    int it = 0;
    for (; it < max_iterations; ++it) {
        order();
        if (value[kDim] - value[0] < tolerance) {
            out.converged = true;
            break;
        }

        Point centroid{};
        for (int v = 0; v < kDim; ++v) {
            for (int j = 0; j < kDim; ++j) centroid[j] += vertex[v][j];
        }
        for (int j = 0; j < kDim; ++j) centroid[j] /= kDim;

        auto blend = [&](const Point& from, double coef) {
            Point p;
            for (int j = 0; j < kDim; ++j) p[j] = centroid[j] + coef * (from[j] - centroid[j]);
            return p;
        };

        const Point reflected = blend(vertex[kDim], -kReflect);
        const double fr = objective(reflected);

        if (fr < value[0]) {
            const Point expanded = blend(vertex[kDim], -kReflect * kExpand);
            const double fe = objective(expanded);
            if (fe < fr) {
                vertex[kDim] = expanded;
                value[kDim] = fe;
            } else {
                vertex[kDim] = reflected;
                value[kDim] = fr;
            }
        } else if (fr < value[kDim - 1]) {
            vertex[kDim] = reflected;
            value[kDim] = fr;
        } else {
            const bool outside = fr < value[kDim];
            const Point contracted =
                outside ? blend(vertex[kDim], -kReflect * kContract)
                        : blend(vertex[kDim], kContract);
            const double fc = objective(contracted);
            if (fc < (outside ? fr : value[kDim])) {
                vertex[kDim] = contracted;
                value[kDim] = fc;
            } else {
                for (int v = 1; v <= kDim; ++v) {
                    for (int j = 0; j < kDim; ++j) {
                        vertex[v][j] = vertex[0][j] + kShrink * (vertex[v][j] - vertex[0][j]);
                    }
                    value[v] = objective(vertex[v]);
                }
            }
        }
    }
    order();
    out.x = vertex[0];
    out.f = value[0];
    out.iterations = it;
    return out;
}

constexpr std::array<double, 4> kAmplitudeStarts = {-0.01, 0.01, -0.1, 0.1};
constexpr std::array<double, 4> kExponentStarts = {-0.5, 0.5, -1.0, 1.0};
constexpr Point kSimplexSteps = {0.05, 0.02, 0.3, 0.5};
constexpr double kSigmaStart = 0.02;

}  // namespace

double neg_log_likelihood(std::span<const OperatorRecord> records,
                          const PlateauParams& params, double sigma,
                          const ClampPolicy& clamp, Exec exec) {
    validate_likelihood_inputs(records, sigma);
    return -blocked_sum(
        records.size(),
        [&](std::size_t i) { return record_log_pmf(records[i], params, sigma, clamp); },
        exec);
}

RegressionFit fit(std::span<const OperatorRecord> records, const FitConfig& config) {
    for (const auto& r : records) validate_record(r);
    if (records.size() < 4) {
        throw InsufficientDataError("fit needs at least 4 records, got "
                                    + std::to_string(records.size()));
    }
    std::vector<OperatorRecord> cohort(records.begin(), records.end());
    // Canonical evaluation order: fitted parameters do not depend on how the
    // caller happened to order the cohort.
    std::sort(cohort.begin(), cohort.end(), [](const auto& l, const auto& r) {
        return std::tie(l.n_total, l.x_repaired, l.operator_id)
             < std::tie(r.n_total, r.x_repaired, r.operator_id);
    });
    const bool all_same_n = std::all_of(cohort.begin(), cohort.end(), [&](const auto& r) {
        return r.n_total == cohort.front().n_total;
    });
    if (all_same_n) {
        throw InsufficientDataError(
            "fit needs at least 2 distinct weld counts; amplitude and exponent are "
            "unidentifiable on a single-count cohort");
    }
    if (config.n_restarts < 1) throw std::domain_error("n_restarts must be >= 1");
    if (!(config.tolerance > 0.0)) throw std::domain_error("tolerance must be positive");

    const auto objective = [&](const Point& theta) {
        const double sigma = std::exp(theta[3]);
        if (!(sigma > 0.0) || !std::isfinite(sigma)) return kInf;
        const PlateauParams params{theta[0], theta[1], theta[2]};
        if (!std::isfinite(theta[0]) || !std::isfinite(theta[1]) || !std::isfinite(theta[2])) {
            return kInf;
        }
        const double nll = -blocked_sum(
            cohort.size(),
            [&](std::size_t i) { return record_log_pmf(cohort[i], params, sigma, config.clamp); },
            Exec::serial);
        return std::isnan(nll) ? kInf : nll;
    };

    double pooled_x = 0.0;
    double pooled_n = 0.0;
    for (const auto& r : cohort) {
        pooled_x += static_cast<double>(r.x_repaired);
        pooled_n += static_cast<double>(r.n_total);
    }
    const double steady_start = pooled_x / pooled_n;

    std::vector<NmOutcome> outcomes(static_cast<std::size_t>(config.n_restarts));
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < config.n_restarts; ++k) {
        Point start = {steady_start,
                       kAmplitudeStarts[static_cast<std::size_t>(k) % 4],
                       kExponentStarts[(static_cast<std::size_t>(k) / 4) % 4],
                       std::log(kSigmaStart)};
        if (k >= 16) {
            Rng jitter(Rng::child_seed(config.seed, static_cast<std::uint64_t>(k)));
            for (int j = 0; j < kDim; ++j) start[j] += kSimplexSteps[j] * jitter.normal();
        }
        outcomes[static_cast<std::size_t>(k)] =
            nelder_mead(objective, start, kSimplexSteps, config.max_iterations,
                        config.tolerance);
    }

    int best = 0;
    for (int k = 1; k < config.n_restarts; ++k) {
        if (outcomes[static_cast<std::size_t>(k)].f < outcomes[static_cast<std::size_t>(best)].f) {
            best = k;
        }
    }
    const NmOutcome& winner = outcomes[static_cast<std::size_t>(best)];

    // Nelder-Mead stagnates on narrow valleys; one polish run from the
    // incumbent with a tighter simplex recovers the lost digits.
    Point polish_steps;
    for (int j = 0; j < kDim; ++j) polish_steps[j] = 0.2 * kSimplexSteps[j];
    const NmOutcome polished = nelder_mead(objective, winner.x, polish_steps,
                                           config.max_iterations, config.tolerance);

    RegressionFit result;
    result.params = PlateauParams{polished.x[0], polished.x[1], polished.x[2]};
    result.sigma = std::exp(polished.x[3]);
    result.log_likelihood = -polished.f;
    result.converged = polished.converged;
    result.iterations = winner.iterations + polished.iterations;
    result.n_restarts_used = config.n_restarts;

    std::size_t clamped = 0;
    for (const auto& r : cohort) {
        if (plateau_eval_clamped(result.params, r.n_total, config.clamp).clamped) ++clamped;
    }
    result.clamp_fraction = static_cast<double>(clamped) / static_cast<double>(cohort.size());
    return result;
}

std::vector<CurvePoint> fitted_curve_table(const RegressionFit& fit,
                                           std::vector<std::int64_t> n_grid) {
    std::sort(n_grid.begin(), n_grid.end());
    std::vector<CurvePoint> table;
    table.reserve(n_grid.size());
    for (std::int64_t n : n_grid) {
        const ClampedValue v = plateau_eval_clamped(fit.params, n);
        table.push_back({n, v.value, v.clamped});
    }
    return table;
}

namespace reference {

double neg_log_likelihood(std::span<const OperatorRecord> records,
                          const PlateauParams& params, double sigma,
                          const ClampPolicy& clamp) {
    validate_likelihood_inputs(records, sigma);
    double total = 0.0;
    for (const auto& r : records) total += record_log_pmf(r, params, sigma, clamp);
    return -total;
}

}  // namespace reference

}  // namespace lcb
