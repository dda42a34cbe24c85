#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "clbound/constants.hpp"

using namespace clbound;

TEST_CASE("sigma_star at the chosen branch point") {
    CHECK(sigma_star(1.0 / 27.0) == Catch::Approx(std::sqrt(8.0 / 9.0)).margin(1e-15));
    CHECK_THROWS_AS(sigma_star(0.0), std::domain_error);
    CHECK_THROWS_AS(sigma_star(1.0), std::domain_error);
}

TEST_CASE("coefficient certificates at beta* = 1/27") {
    const CoefficientCertificates c = coefficient_certificates();
    CHECK(c.tv_term == Catch::Approx(0.90091).margin(5e-5));
    CHECK(c.coeff_affine == Catch::Approx(49.393).margin(5e-3));
    CHECK(c.coeff_general == Catch::Approx(52.390).margin(5e-3));

    CHECK(c.tv_term <= 1.0 - 1e-9);
    CHECK(c.coeff_affine <= 50.0 - 1e-9);
    CHECK(c.coeff_general <= 53.0 - 1e-9);

    // The general coefficient carries the exact factor 3/sigma^2 + 24/sigma^4
    // = 33.75 at sigma^2 = 8/9.
    CHECK(c.coeff_general ==
          Catch::Approx(33.75 * std::sqrt(2.0 * c_constant(1) * c_constant(3))).margin(1e-12));
}

TEST_CASE("affine K bound for the half-line class") {
    const double k = k_bound_affine(1.0 / std::sqrt(2.0 * M_PI), 1.0);
    CHECK(k <= 29.3);
    CHECK(k == Catch::Approx(28.7684).margin(5e-4));
    // Floor branch: gamma* = 0 leaves 1/beta* = 27.
    CHECK(k_bound_affine(0.0, 1.0) == Catch::Approx(27.0).margin(1e-12));
}

TEST_CASE("affine K bound grows with gamma* and kappa") {
    double prev = 0.0;
    for (double g : {0.3, 0.5, 0.8, 1.2}) {
        const double k = k_bound_affine(g, 1.0);
        CHECK(k >= prev);
        prev = k;
    }
    CHECK(k_bound_affine(0.5, 1.0) >= k_bound_affine(0.5, 0.5));
}

TEST_CASE("general K bound branches") {
    const double k = k_bound_general(0.4, 1.0, 1.0 / 27.0, 0.4);
    CHECK(k >= 1.0 / ((1.0 / 27.0) * 0.4) - 1e-12);
    CHECK_THROWS_AS(k_bound_general(0.4, 1.0, 1.0 / 27.0, 0.0), std::domain_error);
    // Coefficient form stays below the rounded assembly for a range of gamma*.
    for (double g : {0.05, 0.3, 0.8, 1.5, 3.0}) {
        const double lhs = k_bound_general_coefficient(g, 0.5);
        const double rhs = std::max(27.0, 1.0 + 53.0 * g * std::sqrt(1.5));
        CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("bundles expose their parts consistently") {
    const ConstantBundle a = constant_bundle_affine(0.5, 1.0);
    CHECK(a.affine);
    CHECK(a.branch_floor == Catch::Approx(27.0).margin(1e-12));
    CHECK(a.k_value == Catch::Approx(std::max(a.branch_floor, a.branch_main)).margin(1e-12));
    CHECK(a.c1 == Catch::Approx(c_constant(1)).margin(1e-15));
    CHECK(a.c3 == Catch::Approx(c_constant(3)).margin(1e-15));

    const ConstantBundle g = constant_bundle_general(0.7, 0.5, 1.0 / 27.0, 0.7);
    CHECK_FALSE(g.affine);
    CHECK(g.gamma0 == Catch::Approx(0.7).margin(1e-15));
    CHECK(g.k_value == Catch::Approx(std::max(g.branch_floor, g.branch_main)).margin(1e-12));
}

TEST_CASE("assembled constant stays below the headline form") {
    for (int d = 1; d <= 1000; ++d) {
        const Theorem1Bound b = theorem1_bound(d);
        const double q = std::pow(d, 0.25);
        CHECK(b.assembled ==
              Catch::Approx(std::max(27.0, 1.0 + 50.0 * std::sqrt(2.0) * (0.59 * q + 0.21)))
                  .margin(1e-12));
        CHECK(b.headline == Catch::Approx(42.0 * q + 16.0).margin(1e-12));
        CHECK(b.assembled <= b.headline);
    }
}

TEST_CASE("beta* sweep shows 1/27 near the optimum") {
    std::vector<double> betas;
    for (double b = 0.015; b <= 0.12; b += 0.0025) betas.push_back(b);
    const auto sweep = k_affine_sweep(1.0 / std::sqrt(2.0 * M_PI), 1.0, betas);
    REQUIRE(sweep.size() == betas.size());
    double best = 1e300;
    for (const auto& [b, k] : sweep) best = std::min(best, k);
    CHECK(k_bound_affine(1.0 / std::sqrt(2.0 * M_PI), 1.0) <= best * 1.02);
}
