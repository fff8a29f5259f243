#include "lcb/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "lcb/errors.hpp"
#include "lcb/regression.hpp"

namespace lcb {

namespace {

constexpr std::int64_t kMcStreams = 64;

bool better_cell(double nll, std::size_t idx, double best_nll, std::size_t best_idx) {
    if (std::isnan(nll)) return false;
    if (nll < best_nll) return true;
    return nll == best_nll && idx < best_idx;
}

}  // namespace

SynthConfig::SynthConfig(PlateauParams truth_, double sigma_, int n_operators_,
                         std::int64_t n_min_, std::int64_t n_max_, std::uint64_t seed_)
    : truth(truth_), sigma(sigma_), n_operators(n_operators_),
      n_min(n_min_), n_max(n_max_), seed(seed_) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::domain_error("synth sigma must be positive and finite");
    }
    if (n_operators < 1) throw std::domain_error("synth cohort needs at least 1 operator");
    if (n_min < 1 || n_max < n_min) {
        throw std::domain_error("synth weld-count range must satisfy 1 <= n_min <= n_max");
    }
}

std::vector<OperatorRecord> generate_cohort(const SynthConfig& config) {
    Rng rng(config.seed);
    std::vector<OperatorRecord> cohort;
    cohort.reserve(static_cast<std::size_t>(config.n_operators));
    std::size_t width = 4;
    for (int v = config.n_operators; v >= 10000; v /= 10) ++width;
    for (int i = 0; i < config.n_operators; ++i) {
        std::string digits = std::to_string(i + 1);
        if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
        const std::string id = "op" + digits;
        const std::int64_t n = rng.uniform_int(config.n_min, config.n_max);
        const double mu = plateau_eval_clamped(config.truth, n, config.clamp).value;
        const double p = rng.beta(mu / config.sigma, (1.0 - mu) / config.sigma);
        const std::int64_t x = rng.binomial(n, p);
        cohort.push_back({id, n, x});
    }
    return cohort;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) throw std::domain_error("linspace needs at least one point");
    std::vector<double> points;
    points.reserve(count);
    if (count == 1) {
        points.push_back(lo);
        return points;
    }
    for (std::size_t i = 0; i < count; ++i) {
        points.push_back(lo + (hi - lo) * static_cast<double>(i)
                                        / static_cast<double>(count - 1));
    }
    return points;
}

GridPoint grid_likelihood_oracle(std::span<const OperatorRecord> records,
                                 const GridSpec& spec, const ClampPolicy& clamp,
                                 Exec exec) {
    const std::size_t na = spec.steady_state.size();
    const std::size_t nb = spec.amplitude.size();
    const std::size_t nc = spec.exponent.size();
    const std::size_t ns = spec.sigma.size();
    if (na == 0 || nb == 0 || nc == 0 || ns == 0) {
        throw std::domain_error("grid oracle: every axis needs at least one value");
    }
    const std::size_t cells = na * nb * nc * ns;
    if (cells > spec.cell_budget) {
        throw GridTooLargeError("grid of " + std::to_string(cells)
                                + " cells exceeds budget of "
                                + std::to_string(spec.cell_budget));
    }
    if (records.empty()) throw std::domain_error("grid oracle: empty cohort");

    const auto cell_nll = [&](std::size_t idx) {
        const std::size_t is = idx % ns;
        const std::size_t ic = (idx / ns) % nc;
        const std::size_t ib = (idx / (ns * nc)) % nb;
        const std::size_t ia = idx / (ns * nc * nb);
        const PlateauParams params{spec.steady_state[ia], spec.amplitude[ib],
                                   spec.exponent[ic]};
        const double sigma = spec.sigma[is];
        if (!(sigma > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        double total = 0.0;
        for (const auto& r : records) {
            const double mu = plateau_eval_clamped(params, r.n_total, clamp).value;
            const double a = mu / sigma;
            const double b = (1.0 - mu) / sigma;
            if (!(a > 0.0) || !(b > 0.0)) return std::numeric_limits<double>::quiet_NaN();
            total += betabinom_log_pmf(r.x_repaired, r.n_total, BetaParams(a, b));
        }
        return -total;
    };

    double best_nll = std::numeric_limits<double>::infinity();
    std::size_t best_idx = std::numeric_limits<std::size_t>::max();

    if (exec == Exec::parallel) {
#pragma omp parallel
        {
            double local_nll = std::numeric_limits<double>::infinity();
            std::size_t local_idx = std::numeric_limits<std::size_t>::max();
#pragma omp for schedule(static) nowait
            for (long long i = 0; i < static_cast<long long>(cells); ++i) {
                const auto idx = static_cast<std::size_t>(i);
                const double nll = cell_nll(idx);
                if (better_cell(nll, idx, local_nll, local_idx)) {
                    local_nll = nll;
                    local_idx = idx;
                }
            }
#pragma omp critical
            {
                // The (nll, index) order is total, so the merged winner is the
                // same whatever order threads arrive in.
                if (better_cell(local_nll, local_idx, best_nll, best_idx)) {
                    best_nll = local_nll;
                    best_idx = local_idx;
                }
            }
        }
    } else {
        for (std::size_t idx = 0; idx < cells; ++idx) {
            const double nll = cell_nll(idx);
            if (better_cell(nll, idx, best_nll, best_idx)) {
                best_nll = nll;
                best_idx = idx;
            }
        }
    }

    if (best_idx == std::numeric_limits<std::size_t>::max()) {
        throw std::domain_error("grid oracle: no finite cell in the grid");
    }
    const std::size_t is = best_idx % ns;
    const std::size_t ic = (best_idx / ns) % nc;
    const std::size_t ib = (best_idx / (ns * nc)) % nb;
    const std::size_t ia = best_idx / (ns * nc * nb);
    return GridPoint{
        PlateauParams{spec.steady_state[ia], spec.amplitude[ib], spec.exponent[ic]},
        spec.sigma[is], best_nll, best_idx};
}

std::vector<double> mc_beta_quantiles(const BetaParams& p, std::span<const double> qs,
                                      std::int64_t n_draws, std::uint64_t seed,
                                      Exec exec) {
    if (n_draws < 100000) {
        throw std::domain_error("mc_beta_quantiles needs at least 1e5 draws, got "
                                + std::to_string(n_draws));
    }
    for (double q : qs) {
        if (!(q > 0.0 && q < 1.0)) {
            throw std::domain_error("quantile level must lie in (0,1)");
        }
    }

    std::vector<double> draws(static_cast<std::size_t>(n_draws));
    const std::int64_t base = n_draws / kMcStreams;
    const std::int64_t rem = n_draws % kMcStreams;
    const bool go_parallel = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (go_parallel)
    for (std::int64_t stream = 0; stream < kMcStreams; ++stream) {
        const std::int64_t count = base + (stream < rem ? 1 : 0);
        std::int64_t offset = stream * base + std::min(stream, rem);
        Rng rng(Rng::child_seed(seed, static_cast<std::uint64_t>(stream)));
        for (std::int64_t i = 0; i < count; ++i) {
            draws[static_cast<std::size_t>(offset + i)] = rng.beta(p.a(), p.b());
        }
    }

    std::sort(draws.begin(), draws.end());
    std::vector<double> quantiles;
    quantiles.reserve(qs.size());
    for (double q : qs) {
        auto k = static_cast<std::size_t>(q * static_cast<double>(n_draws));
        k = std::min(k, draws.size() - 1);
        quantiles.push_back(draws[k]);
    }
    return quantiles;
}

namespace reference {

GridPoint grid_likelihood_oracle(std::span<const OperatorRecord> records,
                                 const GridSpec& spec, const ClampPolicy& clamp) {
    const std::size_t cells = spec.steady_state.size() * spec.amplitude.size()
                            * spec.exponent.size() * spec.sigma.size();
    if (cells == 0) throw std::domain_error("grid oracle: every axis needs at least one value");
    if (cells > spec.cell_budget) {
        throw GridTooLargeError("grid of " + std::to_string(cells)
                                + " cells exceeds budget of "
                                + std::to_string(spec.cell_budget));
    }

    GridPoint best;
    best.neg_log_likelihood = std::numeric_limits<double>::infinity();
    best.cell_index = std::numeric_limits<std::size_t>::max();
    std::size_t idx = 0;
    for (double steady : spec.steady_state) {
        for (double amplitude : spec.amplitude) {
            for (double exponent : spec.exponent) {
                for (double sigma : spec.sigma) {
                    const PlateauParams params{steady, amplitude, exponent};
                    double nll = std::numeric_limits<double>::quiet_NaN();
                    if (sigma > 0.0) {
                        try {
                            nll = lcb::reference::neg_log_likelihood(records, params,
                                                                     sigma, clamp);
                        } catch (const std::domain_error&) {
                            // degenerate shapes; leave the cell out
                        }
                    }
                    if (better_cell(nll, idx, best.neg_log_likelihood, best.cell_index)) {
                        best = GridPoint{params, sigma, nll, idx};
                    }
                    ++idx;
                }
            }
        }
    }
    if (best.cell_index == std::numeric_limits<std::size_t>::max()) {
        throw std::domain_error("grid oracle: no finite cell in the grid");
    }
    return best;
}

}  // namespace reference

}  // namespace lcb
