#pragma once

// Adaptive Gauss-Kronrod quadrature (G7/K15) and Gauss-Hermite rules for
// expectations against the standard normal density.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace clbound {

struct Quadrature {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 50;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1)
            throw std::invalid_argument("Quadrature: tolerances must be positive, max_subdivisions >= 1");
    }
};

namespace detail {

// Kronrod 15-point abscissae on [-1,1] (positive half) and weights; the
// even-indexed abscissae carry the embedded 7-point Gauss rule.
inline constexpr double kGK15X[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGK15WK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGK15WG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GKEstimate {
    double kronrod;
    double error;
};

template <typename F>
GKEstimate gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double gauss = fc * kGK15WG[3];
    double kron = fc * kGK15WK[7];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGK15X[i];
        const double fsum = f(c - dx) + f(c + dx);
        kron += fsum * kGK15WK[i];
        if (i % 2 == 1) gauss += fsum * kGK15WG[i / 2];
    }
    return {kron * h, std::abs((kron - gauss) * h)};
}

template <typename F>
double integrate_rec(F&& f, double a, double b, double tol, int depth, const Quadrature& q) {
    const GKEstimate e = gk15(f, a, b);
    if (e.error <= tol || depth >= q.max_subdivisions) return e.kronrod;
    const double c = 0.5 * (a + b);
    return integrate_rec(f, a, c, 0.5 * tol, depth + 1, q) +
           integrate_rec(f, c, b, 0.5 * tol, depth + 1, q);
}

}  // namespace detail

// Definite integral of f over [a, b].
template <typename F>
double integrate(F&& f, double a, double b, const Quadrature& q = {}) {
    q.validate();
    if (a == b) return 0.0;
    const detail::GKEstimate first = detail::gk15(f, a, b);
    const double tol = std::max(q.abs_tol, q.rel_tol * std::abs(first.kronrod));
    if (first.error <= tol) return first.kronrod;
    const double c = 0.5 * (a + b);
    return detail::integrate_rec(f, a, c, 0.5 * tol, 1, q) +
           detail::integrate_rec(f, c, b, 0.5 * tol, 1, q);
}

// Integral over [a, +inf) via the map x = a + t/(1-t).
template <typename F>
double integrate_semi_inf(F&& f, double a, const Quadrature& q = {}) {
    auto g = [&](double t) {
        const double om = 1.0 - t;
        const double x = a + t / om;
        return f(x) / (om * om);
    };
    // The endpoint t=1 is never evaluated by the open Kronrod abscissae.
    return integrate(g, 0.0, 1.0, q);
}

// Gauss-Hermite rule recast for E[f(Z)], Z ~ N(0,1):
//   sum_i weights[i] * f(nodes[i])  with  sum weights = 1.
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussHermite gauss_hermite_fresh(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1 required");
    // Physicists' rule by Newton iteration on the orthonormal recurrence,
    // largest root first, then exploit symmetry.
    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(n, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    // Convert to probabilists' normalization.
    GaussHermite gh;
    gh.nodes.resize(n);
    gh.weights.resize(n);
    const double isqrtpi = 1.0 / std::sqrt(M_PI);
    for (int i = 0; i < n; ++i) {
        gh.nodes[i] = -std::sqrt(2.0) * x[i];  // ascending order
        gh.weights[i] = w[i] * isqrtpi;
    }
    return gh;
}

// Shared cache; rules are immutable once built.
inline const GaussHermite& gauss_hermite(int n) {
    static std::map<int, GaussHermite> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_hermite_fresh(n)).first;
    return it->second;
}

}  // namespace clbound
