// Timing comparison of the parallel kernels against their serial references:
// cohort log-likelihood, the grid-search oracle, and Monte Carlo beta
// quantiles.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lcb/regression.hpp"
#include "lcb/synth.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double time_ms(const std::function<void()>& body, int reps) {
    body();  // warm-up
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        body();
        const auto t1 = clock_type::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    const lcb::PlateauParams truth{0.149, -0.00544, -0.5};
    const lcb::SynthConfig big(truth, 0.0184, 100000, 20, 500, 7);
    const auto big_cohort = lcb::generate_cohort(big);

    volatile double sink = 0.0;
    row("neg_log_likelihood (1e5)",
        time_ms([&] { sink = lcb::reference::neg_log_likelihood(big_cohort, truth, 0.0184); }, 5),
        time_ms([&] { sink = lcb::neg_log_likelihood(big_cohort, truth, 0.0184, {},
                                                     lcb::Exec::parallel); }, 5));

    const lcb::SynthConfig small(truth, 0.0184, 20, 5, 50, 7);
    const auto small_cohort = lcb::generate_cohort(small);
    lcb::GridSpec grid;
    grid.steady_state = lcb::linspace(0.05, 0.30, 24);
    grid.amplitude = lcb::linspace(-0.05, 0.05, 21);
    grid.exponent = lcb::linspace(-1.5, 1.5, 25);
    grid.sigma = lcb::linspace(0.005, 0.1, 16);

    row("grid oracle (200k cells)",
        time_ms([&] { sink = lcb::reference::grid_likelihood_oracle(small_cohort, grid)
                                 .neg_log_likelihood; }, 3),
        time_ms([&] { sink = lcb::grid_likelihood_oracle(small_cohort, grid, {},
                                                         lcb::Exec::parallel)
                                 .neg_log_likelihood; }, 3));

    const lcb::BetaParams post(29.172, 200.005);
    const std::vector<double> qs = {0.025, 0.5, 0.975};
    row("mc quantiles (2e6 draws)",
        time_ms([&] { sink = lcb::mc_beta_quantiles(post, qs, 2000000, 7,
                                                    lcb::Exec::serial)[0]; }, 3),
        time_ms([&] { sink = lcb::mc_beta_quantiles(post, qs, 2000000, 7,
                                                    lcb::Exec::parallel)[0]; }, 3));

    (void)sink;
    return 0;
}
