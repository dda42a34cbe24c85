#pragma once

// Scalar special functions behind the perimeter and constant computations:
// Gaussian densities, the Mills ratio R(x) and its infimum transform I(y),
// the derivative-integral constants c_r, and Gaussian radial moments via the
// regularized lower incomplete gamma function.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace clbound {

inline constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;
inline constexpr double kSqrtPiOver2 = 1.2533141373155002512078826424055;

// Standard d-variate Gaussian density evaluated at a point with Euclidean
// norm |x| = norm.
inline double gaussian_density(double norm, int d) {
    if (d < 1) throw std::domain_error("gaussian_density: d >= 1 required");
    return std::exp(-0.5 * norm * norm - 0.5 * d * std::log(2.0 * M_PI));
}

// phi_1, the scalar density, as a convenience.
inline double phi1(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

// ---------------------------------------------------------------------------
// Mills ratio
// ---------------------------------------------------------------------------

struct MillsEval {
    double x = 0.0;
    double value = 0.0;       // R(x)
    double derivative = 0.0;  // R'(x) = x R(x) - 1
};

// R(x) = e^{x^2/2} int_x^inf e^{-z^2/2} dz, cancellation-free.
// For moderate x this is sqrt(pi/2) * erfcx(x/sqrt2); past the erfc underflow
// region a backward-evaluated continued fraction takes over (machine-accurate
// there by depth ~30, generous depth used).
inline MillsEval mills_ratio(double x) {
    if (!(x >= 0.0)) throw std::domain_error("mills_ratio: x >= 0 required");
    double value;
    if (x <= 20.0) {
        value = kSqrtPiOver2 * std::exp(0.5 * x * x) * std::erfc(x / std::sqrt(2.0));
    } else {
        double f = 0.0;
        for (int k = 128; k >= 1; --k) f = k / (x + f);
        value = 1.0 / (x + f);
    }
    return {x, value, x * value - 1.0};
}

// I(y) = inf_{x >= 0} (x y + R(x)). The derivative x R(x) - 1 is strictly
// increasing from -1 to 0, so for y >= 1 the minimizer sits at x = 0 and
// otherwise solves x R(x) - 1 = -y uniquely.
inline double inf_mills(double y) {
    if (!(y > 0.0)) throw std::domain_error("inf_mills: y > 0 required");
    if (y >= 1.0) return kSqrtPiOver2;
    auto h = [y](double x) { return mills_ratio(x).derivative + y; };
    double lo = 0.0, hi = 40.0;
    while (h(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("inf_mills: bracket expansion failed");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    const double xstar = 0.5 * (lo + hi);
    return xstar * y + mills_ratio(xstar).value;
}

// ---------------------------------------------------------------------------
// c_r = int |phi_1^{(r)}|
// ---------------------------------------------------------------------------

// Closed forms from the total variation of phi^{(r-1)} between the sign
// changes of phi^{(r)}:
//   c_0 = 1
//   c_1 = 2 phi(0)                  (phi' = -z phi, sign change at 0)
//   c_2 = 4 phi(1)                  (phi'' = (z^2-1) phi, changes at +-1)
//   c_3 = 2 phi(0) + 8 phi(sqrt 3)  (phi''' = (3z - z^3) phi, 0 and +-sqrt 3)
inline double c_constant(int r) {
    switch (r) {
        case 0: return 1.0;
        case 1: return 2.0 * phi1(0.0);
        case 2: return 4.0 * phi1(1.0);
        case 3: return 2.0 * phi1(0.0) + 8.0 * phi1(std::sqrt(3.0));
        default: throw std::domain_error("c_constant: r in {0,1,2,3} required");
    }
}

// ---------------------------------------------------------------------------
// Regularized lower incomplete gamma P(s, x) and log gamma_lower(s, x)
// ---------------------------------------------------------------------------

namespace detail {

// Power-series branch, valid and stable for x < s + 1. Returns
// log of sum_{n>=0} x^n / (s (s+1) ... (s+n)); gamma(s,x) = x^s e^{-x} * sum.
inline double gamma_series_log_sum(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 10000000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (term < sum * 1e-17) return std::log(sum);
    }
    throw std::runtime_error("incomplete gamma: series did not converge");
}

// Modified Lentz continued fraction for Q(s, x), valid for x >= s + 1.
// Returns the CF factor h with Q = e^{-x + s ln x - lgamma(s)} * h.
inline double gamma_cf(double s, double x) {
    constexpr double fpmin = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000000; ++i) {
        const double an = -static_cast<double>(i) * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h;
    }
    throw std::runtime_error("incomplete gamma: continued fraction did not converge");
}

}  // namespace detail

// Regularized lower incomplete gamma P(s, x) = gamma_lower(s, x) / Gamma(s).
inline double gamma_p(double s, double x) {
    if (!(s > 0.0) || !(x >= 0.0)) throw std::domain_error("gamma_p: s > 0, x >= 0 required");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) {
        const double lg = detail::gamma_series_log_sum(s, x);
        return std::exp(s * std::log(x) - x + lg - std::lgamma(s));
    }
    const double q = std::exp(s * std::log(x) - x - std::lgamma(s)) * detail::gamma_cf(s, x);
    return 1.0 - q;
}

// log of the unregularized lower incomplete gamma, usable far into the
// underflow region of P.
inline double log_gamma_lower(double s, double x) {
    if (!(s > 0.0) || !(x >= 0.0)) throw std::domain_error("log_gamma_lower: s > 0, x >= 0 required");
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x < s + 1.0)
        return s * std::log(x) - x + detail::gamma_series_log_sum(s, x);
    const double q = std::exp(s * std::log(x) - x - std::lgamma(s)) * detail::gamma_cf(s, x);
    return std::lgamma(s) + std::log1p(-q);
}

// int_0^r t^{d-1} e^{-t^2/2} dt = 2^{d/2-1} gamma_lower(d/2, r^2/2).
// Pass r = +inf for the complete integral 2^{d/2-1} Gamma(d/2). Overflows to
// +inf for d large enough that Gamma(d/2) does; the perimeter optimizer works
// with log_gamma_lower directly instead.
inline double radial_moment(int d, double r) {
    if (d < 1) throw std::domain_error("radial_moment: d >= 1 required");
    if (!(r >= 0.0)) throw std::domain_error("radial_moment: r >= 0 required");
    const double s = 0.5 * d;
    const double front = std::exp((s - 1.0) * std::log(2.0) + std::lgamma(s));
    if (std::isinf(r)) return front;
    return front * gamma_p(s, 0.5 * r * r);
}

}  // namespace clbound
