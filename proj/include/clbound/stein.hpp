#pragma once

// Numerical realization of the Slepian interpolation U_alpha, the Stein
// operator S g = Lap g - <grad g, w>, the interpolation identity
//
//   E f(W) - N(0,I){f} = -int_0^{pi/2} E[S U_alpha f(W)] tan(alpha) d alpha,
//
// and the pairing bound |int f <grad^r phi_d, u^{x r}>| <= c_r M0*(f) |u|^r.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "special_functions.hpp"

namespace clbound {

struct TestFunction {
    std::function<double(const std::vector<double>&)> eval;
    double m0 = 1.0;  // half-oscillation M0* = (sup f - inf f)/2
    bool smooth = true;
    std::vector<double> breakpoints;  // d = 1 discontinuity locations
    std::string name;

    double operator()(const std::vector<double>& x) const { return eval(x); }
    double operator()(double x) const { return eval({x}); }
};

// ---------------------------------------------------------------------------
// U_alpha and the Stein operator
// ---------------------------------------------------------------------------

// U_alpha f(w) = E f(w cos a + Z sin a), Z ~ N(0, I_d), by Gauss-Hermite
// product quadrature. d in {1, 2}.
inline double u_alpha(const TestFunction& f, double alpha, const std::vector<double>& w,
                      int nodes = 64) {
    const int d = static_cast<int>(w.size());
    if (d != 1 && d != 2) throw std::domain_error("u_alpha: d in {1,2} required");
    if (nodes < 32) throw std::domain_error("u_alpha: nodes >= 32 required");
    if (!(alpha >= 0.0 && alpha <= M_PI_2 + 1e-12))
        throw std::domain_error("u_alpha: alpha in [0, pi/2] required");
    if (alpha <= 0.0) return f(w);
    const bool terminal = alpha >= M_PI_2 * (1.0 - 1e-14);
    const double c = terminal ? 0.0 : std::cos(alpha);
    const double s = terminal ? 1.0 : std::sin(alpha);
    const GaussHermite& gh = gauss_hermite(nodes);
    if (d == 1) {
        double acc = 0.0;
        for (int i = 0; i < nodes; ++i) acc += gh.weights[i] * f(w[0] * c + gh.nodes[i] * s);
        return acc;
    }
    double acc = 0.0;
    std::vector<double> p(2);
    for (int i = 0; i < nodes; ++i) {
        p[0] = w[0] * c + gh.nodes[i] * s;
        double inner = 0.0;
        for (int j = 0; j < nodes; ++j) {
            p[1] = w[1] * c + gh.nodes[j] * s;
            inner += gh.weights[j] * f.eval(p);
        }
        acc += gh.weights[i] * inner;
    }
    return acc;
}

// S g(w) = Lap g(w) - <grad g(w), w>, finite differences with step h.
inline double stein_apply(const std::function<double(const std::vector<double>&)>& g,
                          const std::vector<double>& w, double h = 1e-5) {
    std::vector<double> x = w;
    const double g0 = g(x);
    double lap = 0.0, grad_dot_w = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double wi = x[i];
        x[i] = wi + h;
        const double up = g(x);
        x[i] = wi - h;
        const double dn = g(x);
        x[i] = wi;
        lap += (up - 2.0 * g0 + dn) / (h * h);
        grad_dot_w += wi * (up - dn) / (2.0 * h);
    }
    return lap - grad_dot_w;
}

// ---------------------------------------------------------------------------
// Rademacher sums (d = 1)
// ---------------------------------------------------------------------------

// W = sum_i eps_i / sqrt(n) stored as n+1 binomial atoms.
struct DiscreteSum {
    int n = 0;
    std::vector<double> atoms;    // (2k - n)/sqrt(n), k = 0..n
    std::vector<double> weights;  // C(n,k) 2^{-n}

    static DiscreteSum rademacher(int n) {
        if (n < 1) throw std::invalid_argument("DiscreteSum: n >= 1 required");
        DiscreteSum s;
        s.n = n;
        s.atoms.resize(n + 1);
        s.weights.resize(n + 1);
        const double isq = 1.0 / std::sqrt(static_cast<double>(n));
        if (n <= 62) {
            // Exact integer binomials.
            std::vector<std::uint64_t> row(n + 1, 0);
            row[0] = 1;
            for (int i = 1; i <= n; ++i)
                for (int k = i; k >= 1; --k) row[k] += row[k - 1];
            const double scale = std::ldexp(1.0, -n);
            for (int k = 0; k <= n; ++k) {
                s.atoms[k] = (2.0 * k - n) * isq;
                s.weights[k] = static_cast<double>(row[k]) * scale;
            }
        } else {
            for (int k = 0; k <= n; ++k) {
                s.atoms[k] = (2.0 * k - n) * isq;
                s.weights[k] = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                        std::lgamma(n - k + 1.0) - n * std::log(2.0));
            }
        }
        return s;
    }

    double mean() const {
        double m = 0.0;
        for (std::size_t k = 0; k < atoms.size(); ++k) m += weights[k] * atoms[k];
        return m;
    }
    double variance() const {
        double v = 0.0;
        for (std::size_t k = 0; k < atoms.size(); ++k) v += weights[k] * atoms[k] * atoms[k];
        return v;
    }

    template <typename F>
    double expect(F&& f) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < atoms.size(); ++k) acc += weights[k] * f(atoms[k]);
        return acc;
    }
};

// ---------------------------------------------------------------------------
// Slepian identity
// ---------------------------------------------------------------------------

// Gaussian mean N(0,1){f} by adaptive quadrature, split at breakpoints.
inline double gaussian_mean_1d(const TestFunction& f, const Quadrature& q = {1e-13, 1e-12, 60}) {
    const double L = 12.0;
    std::vector<double> cuts{-L};
    for (double b : f.breakpoints)
        if (b > -L && b < L) cuts.push_back(b);
    cuts.push_back(L);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += integrate([&](double z) { return f(z) * phi1(z); }, cuts[i], cuts[i + 1], q);
    return acc;
}

struct SlepianCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

// Both sides of the interpolation identity for a Rademacher sum W.
//
// The tan-weighted Stein image is evaluated in the cot-damped form
//   tan(a) S U_a f(w) = cot(a) E[f(wc + Zs)(Z^2 - 1)] - w E[f(wc + Zs) Z],
// obtained by differentiating under the Z-expectation; both ends of
// [0, pi/2] are then finite (the first factor decays like sin a cos a at 0,
// the cot kills it at pi/2), so no substitution is needed.
inline SlepianCheck slepian_identity_check(const TestFunction& f, const DiscreteSum& W,
                                           int z_nodes = 80,
                                           const Quadrature& alpha_quad = {1e-11, 1e-10, 48}) {
    if (W.n > 20) throw std::domain_error("slepian_identity_check: n <= 20 required");
    const GaussHermite& gh = gauss_hermite(z_nodes);

    SlepianCheck out;
    out.lhs = W.expect([&](double w) { return f(w); }) - gaussian_mean_1d(f);

    auto integrand = [&](double alpha) {
        const double c = std::cos(alpha), s = std::sin(alpha);
        const double cot = c / s;
        double acc = 0.0;
        for (std::size_t k = 0; k < W.atoms.size(); ++k) {
            const double w = W.atoms[k];
            double a = 0.0, b = 0.0;
            for (int i = 0; i < z_nodes; ++i) {
                const double z = gh.nodes[i];
                const double v = f(w * c + z * s);
                a += gh.weights[i] * v * (z * z - 1.0);
                b += gh.weights[i] * v * z;
            }
            acc += W.weights[k] * (cot * a - w * b);
        }
        return acc;
    };
    out.rhs = -integrate(integrand, 0.0, M_PI_2, alpha_quad);
    if (!std::isfinite(out.rhs))
        throw std::runtime_error("slepian_identity_check: alpha quadrature diverged");
    out.gap = std::abs(out.lhs - out.rhs);
    return out;
}

// ---------------------------------------------------------------------------
// Pairing bound
// ---------------------------------------------------------------------------

inline double hermite_he(int r, double t) {
    switch (r) {
        case 1: return t;
        case 2: return t * t - 1.0;
        case 3: return t * (t * t - 3.0);
        default: throw std::domain_error("hermite_he: r in {1,2,3} required");
    }
}

struct PairingCheck {
    double integral = 0.0;
    double bound = 0.0;
};

// integral = int f(z) <grad^r phi_d(z), u^{x r}> dz, using
// <grad^r phi_d(z), u^{x r}> = (-1)^r |u|^r He_r(<z, u/|u|>) phi_d(z),
// against bound = c_r M0*(f) |u|^r. Throws if the bound is violated beyond
// quadrature slack.
inline PairingCheck derivative_pairing_check(const TestFunction& f, int r,
                                             const std::vector<double>& u, int d) {
    if (d != 1 && d != 2) throw std::domain_error("derivative_pairing_check: d in {1,2}");
    if (static_cast<int>(u.size()) != d)
        throw std::invalid_argument("derivative_pairing_check: u dimension mismatch");
    double unorm = 0.0;
    for (double c : u) unorm += c * c;
    unorm = std::sqrt(unorm);
    if (!(unorm > 0.0) || unorm > 10.0)
        throw std::domain_error("derivative_pairing_check: 0 < |u| <= 10 required");

    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    const double L = 12.0;
    const Quadrature q{1e-12, 1e-11, 52};
    double integral = 0.0;

    if (d == 1) {
        const double uhat = u[0] / unorm;
        std::vector<double> cuts{-L};
        for (double b : f.breakpoints)
            if (b > -L && b < L) cuts.push_back(b);
        cuts.push_back(L);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            integral += integrate(
                [&](double z) { return f(z) * hermite_he(r, z * uhat) * phi1(z); }, cuts[i],
                cuts[i + 1], q);
    } else {
        // Rotate so the first coordinate is along u.
        const double c0 = u[0] / unorm, c1 = u[1] / unorm;
        const Quadrature qin{1e-11, 1e-10, 40};
        integral = integrate(
            [&](double t) {
                const double inner = integrate(
                    [&](double s) {
                        const std::vector<double> z{t * c0 - s * c1, t * c1 + s * c0};
                        return f.eval(z) * phi1(s);
                    },
                    -L, L, qin);
                return inner * hermite_he(r, t) * phi1(t);
            },
            -L, L, qin);
    }
    integral *= sign * std::pow(unorm, r);

    PairingCheck out;
    out.integral = integral;
    out.bound = c_constant(r) * f.m0 * std::pow(unorm, r);
    if (std::abs(out.integral) > out.bound * (1.0 + 1e-8) + 1e-12)
        throw std::runtime_error("derivative_pairing_check: bound violated: |" +
                                 std::to_string(out.integral) + "| > " + std::to_string(out.bound));
    return out;
}

// ---------------------------------------------------------------------------
// Canonical test functions
// ---------------------------------------------------------------------------

inline TestFunction tf_sin() {
    return {[](const std::vector<double>& x) { return std::sin(x[0]); }, 1.0, true, {}, "sin"};
}

inline TestFunction tf_tanh_cubic() {
    return {[](const std::vector<double>& x) { return std::tanh(0.5 * x[0] * x[0] * x[0] - x[0]); },
            1.0, true, {}, "tanh-cubic"};
}

// C-infinity compactly supported bump on [-2, 2], range [0, 1].
inline TestFunction tf_bump() {
    return {[](const std::vector<double>& x) {
                const double t = 0.5 * x[0];
                const double u = 1.0 - t * t;
                return u > 0.0 ? std::exp(1.0 - 1.0 / u) : 0.0;
            },
            0.5, true, {}, "bump"};
}

inline TestFunction tf_cos_mix() {
    return {[](const std::vector<double>& x) { return std::cos(2.0 * x[0]) + 0.5 * std::sin(x[0]); },
            1.5, true, {}, "cos-mix"};
}

inline TestFunction tf_logistic() {
    return {[](const std::vector<double>& x) { return 1.0 / (1.0 + std::exp(-2.0 * x[0])); }, 0.5,
            true, {}, "logistic"};
}

inline TestFunction tf_sign() {
    return {[](const std::vector<double>& x) { return x[0] >= 0.0 ? 1.0 : -1.0; }, 1.0, false,
            {0.0}, "sign"};
}

inline TestFunction tf_constant(double v) {
    return {[v](const std::vector<double>&) { return v; }, 0.0, true, {}, "constant"};
}

}  // namespace clbound
