#pragma once

// Deterministic counter-based random streams. A master seed plus a stream
// index derive independent substreams, so parallel workers and repeated runs
// produce identical output regardless of scheduling.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace clbound {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        // Mix seed and stream so distinct streams decorrelate even for
        // adjacent seeds.
        std::uint64_t s = seed;
        std::uint64_t a = detail::splitmix64(s);
        s = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
        std::uint64_t b = detail::splitmix64(s);
        state_ = a ^ (b + 0x2545f4914f6cdd1dULL);
        if (state_ == 0) state_ = 0x4d595df4d0f33173ULL;
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    // Uniform in [0, 1).
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    // Standard normal via Box-Muller (no cached spare; keeps the stream
    // position independent of call parity).
    double normal() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::vector<double> normal_vector(int d) {
        std::vector<double> v(d);
        for (int i = 0; i < d; ++i) v[i] = normal();
        return v;
    }

    // Uniform point on the unit sphere in R^d.
    std::vector<double> sphere(int d) {
        if (d == 1) return {next_double() < 0.5 ? -1.0 : 1.0};
        for (;;) {
            std::vector<double> v = normal_vector(d);
            double n2 = 0.0;
            for (double c : v) n2 += c * c;
            if (n2 > 1e-300) {
                const double inv = 1.0 / std::sqrt(n2);
                for (double& c : v) c *= inv;
                return v;
            }
        }
    }

    bool rademacher() { return (next_u64() & 1ULL) != 0; }

private:
    std::uint64_t state_;
};

// Acklam's rational approximation for the standard normal quantile,
// polished by one Halley step against erfc. Relative error < 1e-15 on
// (1e-300, 1 - 1e-16).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p in (0,1) required");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

// Halton low-discrepancy sequence with a Cranley-Patterson rotation, used
// for quasi-Monte Carlo Gaussian integrals.
class Halton {
public:
    Halton(int d, std::uint64_t seed) : d_(d), index_(0) {
        static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
        if (d < 1 || d > 12) throw std::invalid_argument("Halton: 1 <= d <= 12");
        Rng r(seed, 0x48414c544fULL);
        for (int j = 0; j < d; ++j) {
            bases_.push_back(primes[j]);
            shifts_.push_back(r.next_double());
        }
    }

    // Next point in the unit cube (0,1)^d, componentwise shifted mod 1.
    std::vector<double> next() {
        ++index_;
        std::vector<double> x(d_);
        for (int j = 0; j < d_; ++j) {
            double f = 1.0, v = 0.0;
            for (std::uint64_t i = index_; i > 0; i /= bases_[j]) {
                f /= bases_[j];
                v += f * static_cast<double>(i % bases_[j]);
            }
            v += shifts_[j];
            v -= std::floor(v);
            // Keep strictly inside (0,1) for quantile transforms.
            if (v <= 0.0) v = 0x1.0p-60;
            if (v >= 1.0) v = 1.0 - 0x1.0p-53;
            x[j] = v;
        }
        return x;
    }

private:
    int d_;
    std::uint64_t index_;
    std::vector<std::uint64_t> bases_;
    std::vector<double> shifts_;
};

}  // namespace clbound
