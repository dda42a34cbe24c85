#pragma once

// Gaussian-perimeter upper bounds for convex sets:
//
//   gamma_bar_{d,p} = 1 / (p I(inf_{r>0} xi1(r,d,p) / (p r)))
//   gamma_bar_d     = inf_{0 < p <= 1} gamma_bar_{d,p}
//
// evaluated by nested one-dimensional minimization. Everything runs in log
// space so d = 1000 (where Gamma(d/2) overflows) stays finite.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "optimize.hpp"
#include "special_functions.hpp"

namespace clbound {

struct PerimeterQuery {
    int d = 1;
    int p_grid = 512;
    int r_grid = 2048;
    double r_lo = 1e-3;
    double r_hi = 0.0;  // 0 selects the default sqrt(2d) + 10
    double p_refine_tol = 1e-10;
    double r_refine_tol = 1e-12;

    void validate() const {
        if (d < 1) throw std::invalid_argument("PerimeterQuery: d >= 1 required");
        if (p_grid < 64) throw std::invalid_argument("PerimeterQuery: p_grid >= 64 required");
        if (r_grid < 64) throw std::invalid_argument("PerimeterQuery: r_grid >= 64 required");
        if (!(r_lo > 0.0)) throw std::invalid_argument("PerimeterQuery: r bracket lower bound > 0 required");
        if (!(p_refine_tol > 0.0 && p_refine_tol <= 1e-6) || !(r_refine_tol > 0.0 && r_refine_tol <= 1e-6))
            throw std::invalid_argument("PerimeterQuery: refine tolerances must lie in (0, 1e-6]");
    }

    double r_hi_effective() const { return r_hi > 0.0 ? r_hi : std::sqrt(2.0 * d) + 10.0; }
};

struct PerimeterResult {
    int d = 0;
    double gamma_bar = 0.0;
    double p_star = 0.0;
    double r_star = 0.0;
    double inner_value = 0.0;  // inf_r xi1/(p r) at p_star
    long evaluations = 0;
    bool r_at_lower_limit = false;  // inner infimum attained at the r -> 0+ endpoint (p = 1 only)
};

namespace detail {

inline double logsumexp2(double a, double b) {
    if (std::isinf(a) && a < 0.0) return b;
    if (std::isinf(b) && b < 0.0) return a;
    const double m = a > b ? a : b;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Per-dimension constants and an r-grid with precomputed radial-moment logs,
// shared across the whole p sweep.
struct InnerGrid {
    int d;
    double half_log2_gamma;  // (d/2 - 1) ln 2 + lgamma(d/2)
    double half_log2;        // (d/2 - 1) ln 2
    std::vector<double> r;
    std::vector<double> log_radial;  // half_log2 + log_gamma_lower(d/2, r^2/2)

    InnerGrid(int dd, double lo, double hi, int n) : d(dd) {
        const double s = 0.5 * d;
        half_log2 = (s - 1.0) * std::log(2.0);
        half_log2_gamma = half_log2 + std::lgamma(s);
        r.resize(n);
        log_radial.resize(n);
        const double la = std::log(lo), lb = std::log(hi);
        for (int i = 0; i < n; ++i) {
            r[i] = std::exp(la + (lb - la) * i / (n - 1.0));
            log_radial[i] = half_log2 + log_gamma_lower(s, 0.5 * r[i] * r[i]);
        }
        r.back() = hi;
    }
};

// ln of xi1(r,d,p) / (p r).
inline double log_obj(const InnerGrid& g, double p, double r, double log_radial_at_r) {
    const double t1 = std::log1p(-p) + g.half_log2_gamma;  // -inf at p = 1
    const double t2 = std::log(p) + log_radial_at_r;
    return 0.5 * r * r - g.d * std::log(r) - std::log(p) + logsumexp2(t1, t2);
}

inline double log_obj_fresh(const InnerGrid& g, double p, double r) {
    return log_obj(g, p, r, g.half_log2 + log_gamma_lower(0.5 * g.d, 0.5 * r * r));
}

struct InnerMin {
    double y;  // exp of the minimal log objective (or the endpoint limit)
    double r_star;
    bool at_lower_limit;
    long evals;
};

// inf over r of xi1/(p r): grid scan, golden refinement, then the analytic
// r -> 0+ endpoint (1/d when p = 1; +inf when p < 1, so no candidate).
inline InnerMin inner_inf(const InnerGrid& g, double p, double r_tol) {
    const int n = static_cast<int>(g.r.size());
    int best = 0;
    double fbest = log_obj(g, p, g.r[0], g.log_radial[0]);
    for (int i = 1; i < n; ++i) {
        const double v = log_obj(g, p, g.r[i], g.log_radial[i]);
        if (v < fbest) {
            fbest = v;
            best = i;
        }
    }
    const double a = g.r[best > 0 ? best - 1 : 0];
    const double b = g.r[best < n - 1 ? best + 1 : n - 1];
    long evals = n;
    MinResult ref = golden_section_min([&](double r) { return log_obj_fresh(g, p, r); }, a, b, r_tol);
    evals += ref.evals;
    double log_min = std::min(fbest, ref.value);
    double r_star = ref.value <= fbest ? ref.x : g.r[best];

    InnerMin out{std::exp(log_min), r_star, false, evals};
    if (p >= 1.0) {
        const double endpoint = 1.0 / g.d;
        if (endpoint < out.y) {
            out.y = endpoint;
            out.r_star = g.r.front();
            out.at_lower_limit = true;
        }
    }
    return out;
}

}  // namespace detail

// xi1(r, d, p) itself. Accepts p in [0, 1]; may overflow to +inf for large d
// at small r, which is faithful to the formula (callers needing the large-d
// regime use the log-space objective inside gamma_bar_d).
inline double xi1(double r, int d, double p) {
    if (!(r > 0.0)) throw std::domain_error("xi1: r > 0 required");
    if (d < 1) throw std::domain_error("xi1: d >= 1 required");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("xi1: p in [0,1] required");
    const double s = 0.5 * d;
    const double t1 = p < 1.0 ? std::log1p(-p) + (s - 1.0) * std::log(2.0) + std::lgamma(s)
                              : -std::numeric_limits<double>::infinity();
    const double t2 = p > 0.0 ? std::log(p) + (s - 1.0) * std::log(2.0) + log_gamma_lower(s, 0.5 * r * r)
                              : -std::numeric_limits<double>::infinity();
    return std::exp(0.5 * r * r - (d - 1.0) * std::log(r) + detail::logsumexp2(t1, t2));
}

inline double gamma_bar_dp(int d, double p, const PerimeterQuery& tuning = {}) {
    if (d < 1) throw std::domain_error("gamma_bar_dp: d >= 1 required");
    if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("gamma_bar_dp: p in (0,1] required");
    PerimeterQuery q = tuning;
    q.d = d;
    q.validate();
    detail::InnerGrid grid(d, q.r_lo, q.r_hi_effective(), q.r_grid);
    const detail::InnerMin m = detail::inner_inf(grid, p, q.r_refine_tol);
    return 1.0 / (p * inf_mills(m.y));
}

inline PerimeterResult gamma_bar_d(const PerimeterQuery& query) {
    query.validate();
    detail::InnerGrid grid(query.d, query.r_lo, query.r_hi_effective(), query.r_grid);
    long evals = 0;

    auto value_at = [&](double p) {
        const detail::InnerMin m = detail::inner_inf(grid, p, query.r_refine_tol);
        evals += m.evals;
        return 1.0 / (p * inf_mills(m.y));
    };

    // Outer grid over p = k / p_grid, k = 1..p_grid (includes p = 1).
    int best = 1;
    double fbest = value_at(1.0 / query.p_grid);
    for (int k = 2; k <= query.p_grid; ++k) {
        const double v = value_at(static_cast<double>(k) / query.p_grid);
        if (v < fbest) {
            fbest = v;
            best = k;
        }
    }
    const double pa = static_cast<double>(best > 1 ? best - 1 : 1) / query.p_grid;
    const double pb = static_cast<double>(best < query.p_grid ? best + 1 : query.p_grid) / query.p_grid;
    MinResult ref = golden_section_min(value_at, pa, pb, query.p_refine_tol);

    double p_star = ref.x, gamma = ref.value;
    if (fbest < gamma) {
        p_star = static_cast<double>(best) / query.p_grid;
        gamma = fbest;
    }

    const detail::InnerMin m = detail::inner_inf(grid, p_star, query.r_refine_tol);
    evals += m.evals;

    PerimeterResult res;
    res.d = query.d;
    res.gamma_bar = gamma;
    res.p_star = p_star;
    res.r_star = m.r_star;
    res.inner_value = m.y;
    res.evaluations = evals;
    res.r_at_lower_limit = m.at_lower_limit;
    if (!(res.gamma_bar > 0.0) || !std::isfinite(res.gamma_bar))
        throw std::runtime_error("gamma_bar_d: optimizer failed to produce a finite bound");
    return res;
}

// sqrt(2/pi) + 0.59 (d^{1/4} - 1).
inline double theorem2_bound(int d) {
    if (d < 1) throw std::domain_error("theorem2_bound: d >= 1 required");
    return std::sqrt(2.0 / M_PI) + 0.59 * (std::pow(d, 0.25) - 1.0);
}

// 0.59 d^{1/4} + 0.21, the weakened linear envelope.
inline double theorem2_bound_linear(int d) {
    if (d < 1) throw std::domain_error("theorem2_bound_linear: d >= 1 required");
    return 0.59 * std::pow(d, 0.25) + 0.21;
}

// K(p) = inf_{0 <= x <= 1} ((1-p)/p) sqrt(2 pi) e^{x^2/2} + R(x).
inline double k_of_p(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("k_of_p: p in (0,1) required");
    const double c = (1.0 - p) / p * kSqrt2Pi;
    auto f = [c](double x) { return c * std::exp(0.5 * x * x) + mills_ratio(x).value; };
    return grid_then_golden(f, 0.0, 1.0, 2001, 1e-12).value;
}

// Maximizer of p^2 K(p), the mixing weight behind the asymptotic coefficient.
struct MixingOptimum {
    double p;
    double value;  // p^2 K(p)
};

inline MixingOptimum optimal_mixing(double p_lo = 0.05, double p_hi = 0.95) {
    auto neg = [](double p) { return -(p * p * k_of_p(p)); };
    const MinResult r = grid_then_golden(neg, p_lo, p_hi, 1801, 1e-9);
    return {r.x, -r.value};
}

// Closed-form Gaussian perimeters for the two shapes with elementary
// boundary integrals.
enum class Shape { HalfSpaceAt, BallRadius };

inline double analytic_perimeter(Shape shape, double param, int d) {
    if (d < 1) throw std::domain_error("analytic_perimeter: d >= 1 required");
    switch (shape) {
        case Shape::HalfSpaceAt:
            return phi1(param);
        case Shape::BallRadius: {
            if (!(param > 0.0)) throw std::domain_error("analytic_perimeter: radius > 0 required");
            const double s = 0.5 * d;
            return std::exp((d - 1.0) * std::log(param) - 0.5 * param * param -
                            (s - 1.0) * std::log(2.0) - std::lgamma(s));
        }
    }
    throw std::domain_error("analytic_perimeter: unknown shape");
}

// Table emission: full-precision value plus the round-up-at-3-decimals column.
struct PerimeterTableRow {
    int d;
    double gamma_bar;
    double gamma_bar_rounded_up;  // ceil at 3 decimals
    double ratio;                 // gamma_bar / d^{1/4}
    double ratio_rounded_up;
    bool near_round_boundary;  // optimizer value within 5e-5 of a 0.001 boundary
};

inline double round_up_3(double v) { return std::ceil(v * 1000.0 - 1e-9) / 1000.0; }

inline PerimeterTableRow perimeter_table_row(const PerimeterResult& r) {
    PerimeterTableRow row;
    row.d = r.d;
    row.gamma_bar = r.gamma_bar;
    row.gamma_bar_rounded_up = round_up_3(r.gamma_bar);
    row.ratio = r.gamma_bar / std::pow(r.d, 0.25);
    row.ratio_rounded_up = round_up_3(row.ratio);
    const double frac = r.gamma_bar * 1000.0 - std::floor(r.gamma_bar * 1000.0);
    row.near_round_boundary = frac < 0.05 || frac > 0.95;
    return row;
}

}  // namespace clbound
