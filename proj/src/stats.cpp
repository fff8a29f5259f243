#include "lcb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lcb {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2

// Stirling-series remainder: lnGamma(x) = (x-1/2)ln x - x + ln(2*pi)/2 + corr(x).
// Coefficients B_{2k} / (2k(2k-1)); usable for x >= 13 where the truncation
// error is below 1e-16.
double stirling_corr(double x) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    return r * (1.0 / 12.0
           + r2 * (-1.0 / 360.0
           + r2 * (1.0 / 1260.0
           + r2 * (-1.0 / 1680.0
           + r2 * (1.0 / 1188.0
           + r2 * (-691.0 / 360360.0))))));
}

constexpr double kStirlingMin = 13.0;

double log_gamma_stirling(double x) {
    return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + stirling_corr(x);
}

void require_positive_finite(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(name) + " must be positive and finite, got "
                                + std::to_string(v));
    }
}

// ln B(a,b) for min(a,b) >= kStirlingMin, grouped so no large-argument
// cancellation occurs: the (x-1/2)ln x terms are folded into ratios.
double log_beta_large(double a, double b) {
    const double sum = a + b;
    return kHalfLog2Pi - 0.5 * std::log(sum)
         + (a - 0.5) * (-std::log1p(b / a))
         + (b - 0.5) * (-std::log1p(a / b))
         + stirling_corr(a) + stirling_corr(b) - stirling_corr(sum);
}

// Continued fraction for I_x(a,b), modified Lentz algorithm. Valid for
// x < (a+1)/(a+b+2); callers apply the symmetry transform otherwise.
double beta_cf(double x, double a, double b) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    constexpr int kMaxIter = 300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;

    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

BetaParams::BetaParams(double a, double b) : a_(a), b_(b) {
    require_positive_finite(a, "beta shape a");
    require_positive_finite(b, "beta shape b");
}

BetaParams BetaParams::from_mean_spread(double mu, double sigma) {
    if (!(mu > 0.0 && mu < 1.0)) {
        throw std::domain_error("beta mean must lie in (0,1), got " + std::to_string(mu));
    }
    require_positive_finite(sigma, "beta spread");
    return BetaParams(mu / sigma, (1.0 - mu) / sigma);
}

double log_gamma(double x) {
    require_positive_finite(x, "log_gamma argument");
    if (x >= kStirlingMin) return log_gamma_stirling(x);
    // Shift into the series' range: lnG(x) = lnG(x+m) - sum ln(x+i).
    double shift = 0.0;
    double y = x;
    while (y < kStirlingMin) {
        shift += std::log(y);
        y += 1.0;
    }
    return log_gamma_stirling(y) - shift;
}

double log_beta_fn(double a, double b) {
    require_positive_finite(a, "beta shape a");
    require_positive_finite(b, "beta shape b");
    // Canonical argument order makes the symmetry exact as computed.
    double hi = std::max(a, b);
    double lo = std::min(a, b);

    if (lo >= kStirlingMin) return log_beta_large(hi, lo);
    if (hi < kStirlingMin) {
        return log_gamma(hi) + log_gamma(lo) - log_gamma(hi + lo);
    }
    // Raise the small shape with B(a,b) = B(a,b+1) * (a+b)/b until the
    // grouped large-argument form applies.
    double shift = 0.0;
    while (lo < kStirlingMin) {
        shift += std::log((hi + lo) / lo);
        lo += 1.0;
    }
    return log_beta_large(hi, lo) + shift;
}

double log_choose(std::int64_t n, std::int64_t x) {
    if (n < 0 || x < 0 || x > n) {
        throw std::domain_error("log_choose requires 0 <= x <= n");
    }
    if (x == 0 || x == n) return 0.0;
    return log_gamma(static_cast<double>(n) + 1.0)
         - log_gamma(static_cast<double>(x) + 1.0)
         - log_gamma(static_cast<double>(n - x) + 1.0);
}

double beta_mean(const BetaParams& p) {
    return p.mean();
}

double beta_cdf(double x, const BetaParams& p) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("beta_cdf argument must lie in [0,1], got " + std::to_string(x));
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double a = p.a();
    const double b = p.b();
    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta_fn(a, b);

    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * beta_cf(x, a, b) / a;
    }
    return 1.0 - std::exp(log_front) * beta_cf(1.0 - x, b, a) / b;
}

double beta_log_pdf(double x, const BetaParams& p) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("beta_log_pdf argument must lie in [0,1]");
    }
    const double a = p.a();
    const double b = p.b();
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (x == 0.0) return a < 1.0 ? inf : (a > 1.0 ? -inf : -log_beta_fn(a, b));
    if (x == 1.0) return b < 1.0 ? inf : (b > 1.0 ? -inf : -log_beta_fn(a, b));
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta_fn(a, b);
}

double beta_pdf(double x, const BetaParams& p) {
    return std::exp(beta_log_pdf(x, p));
}

double beta_quantile(double q, const BetaParams& p) {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("beta_quantile level must lie in (0,1), got " + std::to_string(q));
    }
    constexpr double kTol = 1e-10;
    constexpr int kMaxIter = 200;

    double lo = 0.0;
    double hi = 1.0;
    double x = 0.5;
    double f = beta_cdf(x, p) - q;

    for (int it = 0; it < kMaxIter; ++it) {
        if (std::fabs(f) <= kTol) return x;
        if (f > 0.0) hi = x; else lo = x;
        if (hi - lo <= std::numeric_limits<double>::epsilon() * x) return x;

        double next;
        if (hi - lo < 1e-2) {
            const double slope = beta_pdf(x, p);
            next = slope > 0.0 ? x - f / slope : lo;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        } else {
            next = 0.5 * (lo + hi);
        }
        x = next;
        f = beta_cdf(x, p) - q;
    }
    return x;
}

double betabinom_log_pmf(std::int64_t x, std::int64_t n, const BetaParams& p) {
    if (n < 1 || x < 0 || x > n) {
        throw std::domain_error("betabinom_log_pmf requires 0 <= x <= n and n >= 1");
    }
    const double xd = static_cast<double>(x);
    const double nd = static_cast<double>(n);
    return log_choose(n, x)
         + log_beta_fn(xd + p.a(), nd - xd + p.b())
         - log_beta_fn(p.a(), p.b());
}

}  // namespace lcb
