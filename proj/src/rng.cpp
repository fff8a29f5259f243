#include "lcb/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace lcb {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
}

std::uint64_t Rng::child_seed(std::uint64_t seed, std::uint64_t stream_index) {
    std::uint64_t sm = seed;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= stream_index; ++i) out = splitmix64_next(sm);
    return out;
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::domain_error("uniform_int: empty range");
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return lo + static_cast<std::int64_t>(next());  // full 64-bit span

    // Lemire's multiply-shift with rejection of the biased low region.
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * range;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t threshold = (0ULL - range) % range;
        while (low < threshold) {
            x = next();
            m = static_cast<__uint128_t>(x) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return lo + static_cast<std::int64_t>(m >> 64);
}

double Rng::normal() {
    for (;;) {
        const double u = 2.0 * uniform01() - 1.0;
        const double v = 2.0 * uniform01() - 1.0;
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) throw std::domain_error("gamma shape must be positive");
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform_open01(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::beta(double a, double b) {
    const double ga = gamma(a);
    const double gb = gamma(b);
    const double sum = ga + gb;
    if (sum == 0.0) {
        // Both draws underflowed (astronomically small shapes); the
        // distribution is then a Bernoulli on the endpoints.
        return uniform_open01() < a / (a + b) ? 1.0 : 0.0;
    }
    return ga / sum;
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
    if (n < 0) throw std::domain_error("binomial count must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial probability outside [0,1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p > 0.5) return n - binomial(n, 1.0 - p);

    const double log_pmf0 = static_cast<double>(n) * std::log1p(-p);
    if (log_pmf0 < -700.0) {
        // pmf(0) underflows; split the count so each half is representable.
        const std::int64_t half = n / 2;
        return binomial(half, p) + binomial(n - half, p);
    }

    const double ratio = p / (1.0 - p);
    double pmf = std::exp(log_pmf0);
    double cdf = pmf;
    const double u = uniform01();
    std::int64_t k = 0;
    while (u > cdf && k < n) {
        ++k;
        pmf *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

}  // namespace lcb
