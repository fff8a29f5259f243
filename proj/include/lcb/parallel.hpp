#pragma once

// Deterministic parallel kernels. Work is partitioned into fixed-size blocks
// whose partial results are combined in block order, so results are identical
// regardless of thread count (and identical to the serial execution of the
// same blocked arithmetic).

#include <cstddef>
#include <vector>

namespace lcb {

enum class Exec { serial, parallel };

inline constexpr std::size_t kSumBlock = 64;

// Blocked sum of term(i) for i in [0, count). The blocked arithmetic differs
// from a plain left-to-right accumulation only by rounding; tests compare the
// two within tolerance.
template <typename TermFn>
double blocked_sum(std::size_t count, TermFn&& term, Exec exec = Exec::parallel) {
    if (count == 0) return 0.0;
    const std::size_t n_blocks = (count + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(n_blocks, 0.0);

    const bool go_parallel = exec == Exec::parallel && count >= 512;
#pragma omp parallel for schedule(static) if (go_parallel)
    for (long long blk = 0; blk < static_cast<long long>(n_blocks); ++blk) {
        const std::size_t begin = static_cast<std::size_t>(blk) * kSumBlock;
        const std::size_t end = std::min(begin + kSumBlock, count);
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += term(i);
        partial[static_cast<std::size_t>(blk)] = s;
    }

    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace lcb
