#pragma once

// Portable, seedable random source. The exact algorithms are fixed so that
// seeded outputs are reproducible across platforms and compilers:
//
//   engine      xoshiro256++, state seeded by four successive splitmix64
//               outputs of the 64-bit seed
//   splitting   child_seed(seed, k) = (k+1)-th output of splitmix64
//               initialized with `seed`
//   uniform     53-bit mantissa: (next() >> 11) * 2^-53; the open-interval
//               variant adds half an ulp so 0 and 1 never occur
//   integers    Lemire multiply-shift with rejection (unbiased)
//   normal      Marsaglia polar method, first coordinate of each pair
//   gamma       Marsaglia-Tsang squeeze for shape >= 1; the shape+1 boost
//               with u^(1/shape) below 1
//   beta        ratio of two gamma draws
//   binomial    cdf inversion, complemented for p > 1/2, halving split when
//               (1-p)^n underflows

#include <cstdint>

namespace lcb {

std::uint64_t splitmix64_next(std::uint64_t& state);

class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Sub-stream seed derivation for parallel generation.
    static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t next();

    double uniform01();       // [0, 1)
    double uniform_open01();  // (0, 1)
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive

    double normal();
    double gamma(double shape);  // unit scale
    double beta(double a, double b);
    std::int64_t binomial(std::int64_t n, double p);

private:
    std::uint64_t s_[4];
};

}  // namespace lcb
