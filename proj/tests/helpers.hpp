#pragma once

#include <cmath>

#include <doctest.h>

namespace lcb::test {

// Relative closeness with an absolute floor for values near zero.
inline bool close(double actual, double expected, double rel, double abs_floor = 0.0) {
    const double diff = std::fabs(actual - expected);
    return diff <= std::max(rel * std::fabs(expected), abs_floor);
}

#define CHECK_CLOSE(actual, expected, rel)                                        \
    do {                                                                          \
        const double a_ = (actual);                                              \
        const double e_ = (expected);                                            \
        INFO("actual=", a_, " expected=", e_, " rel_err=",                       \
             std::fabs(a_ - e_) / std::max(1e-300, std::fabs(e_)));              \
        CHECK(lcb::test::close(a_, e_, (rel)));                                  \
    } while (0)

#define CHECK_ABS(actual, expected, tol)                                          \
    do {                                                                          \
        const double a_ = (actual);                                              \
        const double e_ = (expected);                                            \
        INFO("actual=", a_, " expected=", e_, " abs_err=", std::fabs(a_ - e_)); \
        CHECK(std::fabs(a_ - e_) <= (tol));                                      \
    } while (0)

}  // namespace lcb::test
