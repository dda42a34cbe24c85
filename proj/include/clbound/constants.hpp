#pragma once

// The Berry-Esseen constant bootstrap: sigma*, the two master inequalities
// for K over a set class with smoothing constants (gamma*, kappa), and the
// assembled dimension-dependent constant for convex sets.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "perimeter.hpp"
#include "special_functions.hpp"

namespace clbound {

inline double sigma_star(double beta_star) {
    if (!(beta_star > 0.0 && beta_star < 1.0))
        throw std::domain_error("sigma_star: beta_star in (0,1) required");
    return std::sqrt(1.0 - std::pow(beta_star, 2.0 / 3.0));
}

// The three recurring coefficient expressions at a given beta_star. At the
// default 1/27 (sigma* = sqrt(8/9)) they evaluate to about 0.901, 49.4 and
// 52.4, certifying the rounded 1 / 50 / 53.
struct CoefficientCertificates {
    double beta_star;
    double sigma;
    double tv_term;        // c3 / (2 sigma*^3)
    double coeff_affine;   // sqrt(2 c1 c3) (3/sigma* + 24/sigma*^3)
    double coeff_general;  // sqrt(2 c1 c3) (3/sigma*^2 + 24/sigma*^4)
};

inline CoefficientCertificates coefficient_certificates(double beta_star = 1.0 / 27.0) {
    const double s = sigma_star(beta_star);
    const double c1 = c_constant(1), c3 = c_constant(3);
    const double root = std::sqrt(2.0 * c1 * c3);
    CoefficientCertificates c;
    c.beta_star = beta_star;
    c.sigma = s;
    c.tv_term = c3 / (2.0 * s * s * s);
    c.coeff_affine = root * (3.0 / s + 24.0 / (s * s * s));
    c.coeff_general = root * (3.0 / (s * s) + 24.0 / (s * s * s * s));
    return c;
}

// K bound for classes satisfying the affine closure (A1'):
//   max{ 1/beta*, c3/(2 sigma*^3) + gamma* sqrt(2(1+kappa) c1 c3) (3/sigma* + 24/sigma*^3) }.
inline double k_bound_affine(double gamma_star, double kappa, double beta_star = 1.0 / 27.0) {
    if (!(gamma_star >= 0.0) || !(kappa >= 0.0))
        throw std::domain_error("k_bound_affine: gamma_star, kappa >= 0 required");
    const double s = sigma_star(beta_star);
    const double c1 = c_constant(1), c3 = c_constant(3);
    const double main = c3 / (2.0 * s * s * s) +
                        gamma_star * std::sqrt(2.0 * (1.0 + kappa) * c1 * c3) *
                            (3.0 / s + 24.0 / (s * s * s));
    return std::max(1.0 / beta_star, main);
}

// K bound in the general (A1) case at scale floor gamma0:
//   max{ 1/(beta* gamma0), c3/(2 sigma*^3 gamma0) + sqrt(2(1+kappa) c1 c3) (3/sigma*^2 + 24/sigma*^4) }.
inline double k_bound_general(double gamma_star, double kappa, double beta_star, double gamma0) {
    if (!(gamma_star >= 0.0) || !(kappa >= 0.0))
        throw std::domain_error("k_bound_general: gamma_star, kappa >= 0 required");
    if (!(gamma0 > 0.0)) throw std::domain_error("k_bound_general: gamma0 > 0 required");
    const double s = sigma_star(beta_star);
    const double c1 = c_constant(1), c3 = c_constant(3);
    const double main = c3 / (2.0 * s * s * s * gamma0) +
                        std::sqrt(2.0 * (1.0 + kappa) * c1 * c3) *
                            (3.0 / (s * s) + 24.0 / (s * s * s * s));
    return std::max(1.0 / (beta_star * gamma0), main);
}

// Caller-facing general-case coefficient: substitute gamma0 = gamma* (floored
// away from zero) and rescale to the set-probability coefficient, which the
// rounded form max{27, 1 + 53 gamma* sqrt(1+kappa)} dominates.
inline double k_bound_general_coefficient(double gamma_star, double kappa,
                                          double beta_star = 1.0 / 27.0) {
    const double gamma0 = std::max(gamma_star, 1e-6);
    return gamma0 * k_bound_general(gamma_star, kappa, beta_star, gamma0);
}

struct ConstantBundle {
    double beta_star = 1.0 / 27.0;
    double sigma_star = 0.0;
    double c1 = 0.0;
    double c3 = 0.0;
    double kappa = 0.0;
    double gamma_star = 0.0;
    double gamma0 = 0.0;       // general case only; 0 marks the affine case
    double branch_floor = 0.0; // 1/beta* resp. 1/(beta* gamma0)
    double branch_main = 0.0;
    double k_value = 0.0;
    bool affine = true;
};

inline ConstantBundle constant_bundle_affine(double gamma_star, double kappa,
                                             double beta_star = 1.0 / 27.0) {
    ConstantBundle b;
    b.beta_star = beta_star;
    b.sigma_star = sigma_star(beta_star);
    b.c1 = c_constant(1);
    b.c3 = c_constant(3);
    b.kappa = kappa;
    b.gamma_star = gamma_star;
    b.affine = true;
    b.branch_floor = 1.0 / beta_star;
    b.branch_main = b.c3 / (2.0 * std::pow(b.sigma_star, 3)) +
                    gamma_star * std::sqrt(2.0 * (1.0 + kappa) * b.c1 * b.c3) *
                        (3.0 / b.sigma_star + 24.0 / std::pow(b.sigma_star, 3));
    b.k_value = k_bound_affine(gamma_star, kappa, beta_star);
    return b;
}

inline ConstantBundle constant_bundle_general(double gamma_star, double kappa,
                                              double beta_star = 1.0 / 27.0,
                                              double gamma0 = 0.0) {
    ConstantBundle b;
    b.beta_star = beta_star;
    b.sigma_star = sigma_star(beta_star);
    b.c1 = c_constant(1);
    b.c3 = c_constant(3);
    b.kappa = kappa;
    b.gamma_star = gamma_star;
    b.affine = false;
    b.gamma0 = gamma0 > 0.0 ? gamma0 : std::max(gamma_star, 1e-6);
    b.branch_floor = 1.0 / (beta_star * b.gamma0);
    b.branch_main = b.c3 / (2.0 * std::pow(b.sigma_star, 3) * b.gamma0) +
                    std::sqrt(2.0 * (1.0 + kappa) * b.c1 * b.c3) *
                        (3.0 / std::pow(b.sigma_star, 2) + 24.0 / std::pow(b.sigma_star, 4));
    b.k_value = k_bound_general(gamma_star, kappa, beta_star, b.gamma0);
    return b;
}

// Sweep over beta* candidates for users tuning other classes.
inline std::vector<std::pair<double, double>> k_affine_sweep(double gamma_star, double kappa,
                                                             const std::vector<double>& betas) {
    std::vector<std::pair<double, double>> out;
    out.reserve(betas.size());
    for (double b : betas) out.emplace_back(b, k_bound_affine(gamma_star, kappa, b));
    return out;
}

// Dimension-dependent constant for measurable convex sets: the assembled
// form max{27, 1 + 50 sqrt(2) (0.59 d^{1/4} + 0.21)} (kappa = 1, gamma*
// bounded by the linear perimeter bound) and the headline 42 d^{1/4} + 16.
struct Theorem1Bound {
    int d;
    double assembled;
    double headline;
};

inline Theorem1Bound theorem1_bound(int d) {
    if (d < 1) throw std::domain_error("theorem1_bound: d >= 1 required");
    Theorem1Bound t;
    t.d = d;
    t.assembled = std::max(27.0, 1.0 + 50.0 * std::sqrt(2.0) * theorem2_bound_linear(d));
    t.headline = 42.0 * std::pow(d, 0.25) + 16.0;
    if (t.assembled > t.headline)
        throw std::logic_error("theorem1_bound: assembled form exceeded the headline form");
    return t;
}

}  // namespace clbound
