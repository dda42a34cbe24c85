#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "clbound/monte_carlo.hpp"
#include "clbound/perimeter.hpp"
#include "clbound/serialize.hpp"

using namespace clbound;

TEST_CASE("axis counts split n as evenly as possible") {
    SummandSpec s;
    s.d = 3;
    s.n = 10;
    const auto c = s.axis_counts();
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 4);
    CHECK(c[1] == 3);
    CHECK(c[2] == 3);
    s.n = 2;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("lyapunov sums in closed form") {
    SummandSpec rad{SummandKind::RademacherAxes, 1, 100, 0.5};
    CHECK(rad.lyapunov_sum() == Catch::Approx(0.1).margin(1e-15));

    SummandSpec sph{SummandKind::UniformSphere, 3, 48, 0.5};
    CHECK(sph.lyapunov_sum() ==
          Catch::Approx(std::pow(3.0, 1.5) / std::sqrt(48.0)).margin(1e-14));

    // Two-point with p = 1/2 reduces to the Rademacher shape factor 1.
    SummandSpec tp{SummandKind::TwoPointAsymmetric, 2, 64, 0.5};
    SummandSpec rad2{SummandKind::RademacherAxes, 2, 64, 0.5};
    CHECK(tp.lyapunov_sum() == Catch::Approx(rad2.lyapunov_sum()).margin(1e-14));

    // Asymmetry inflates the third moment.
    SummandSpec skew{SummandKind::TwoPointAsymmetric, 2, 64, 0.9};
    CHECK(skew.lyapunov_sum() > 2.0 * tp.lyapunov_sum());
}

TEST_CASE("summand covariances add to the identity") {
    for (SummandKind k : {SummandKind::RademacherAxes, SummandKind::UniformSphere,
                          SummandKind::TwoPointAsymmetric}) {
        for (int d : {1, 2, 3}) {
            SummandSpec s{k, d, 77, 0.3};
            CHECK(covariance_deviation(s) <= 1e-12);
        }
    }
}

TEST_CASE("lattice atom counts") {
    SummandSpec s{SummandKind::RademacherAxes, 3, 256, 0.5};
    // 86 * 85 * 85 atoms.
    REQUIRE(s.lattice_atoms().has_value());
    CHECK(*s.lattice_atoms() == 87ULL * 86 * 86);
    SummandSpec cont{SummandKind::UniformSphere, 2, 16, 0.5};
    CHECK_FALSE(cont.lattice_atoms().has_value());
}

TEST_CASE("normal measure closed forms") {
    CHECK(normal_measure(TestSet::half_space({1.0, 0.0}, 0.0), 2) ==
          Catch::Approx(0.5).margin(1e-14));
    CHECK(normal_measure(TestSet::half_space({0.0, 1.0}, 1.0), 2) ==
          Catch::Approx(0.8413447460685429).margin(1e-12));
    const double r = 1.7;
    CHECK(normal_measure(TestSet::ball({0.0, 0.0}, r), 2) ==
          Catch::Approx(-std::expm1(-0.5 * r * r)).margin(1e-13));
    CHECK(normal_measure(TestSet::interval_union({{-1.0, 1.0}}, 1.0), 1) ==
          Catch::Approx(0.6826894921370859).margin(1e-12));
}

TEST_CASE("off-center ball measure: qmc against the noncentral value") {
    // Centered ball through the QMC path agrees with the incomplete gamma.
    const QmcEstimate q = qmc_ball_measure({0.0, 0.0, 0.0}, std::sqrt(3.0), 3, 1000000, 3);
    const double exact = gamma_p(1.5, 1.5);
    CHECK(std::abs(q.value - exact) <= 3.0 * q.std_error + 1e-6);
    CHECK(q.std_error < 2e-3);

    // Off-center: shifting the center cannot raise the measure above centered.
    const double off = normal_measure(TestSet::ball({0.9, 0.0, 0.0}, std::sqrt(3.0)), 3);
    CHECK(off < exact);
    CHECK(off > 0.3);
}

TEST_CASE("exact kolmogorov half-line distance at n = 100") {
    const double sup = exact_kolmogorov_halfline(100);
    CHECK(sup == Catch::Approx(0.039794618693589384).margin(1e-10));
    // The distance shrinks roughly like n^{-1/2}.
    const double sup400 = exact_kolmogorov_halfline(400);
    CHECK(sup400 == Catch::Approx(sup / 2.0).epsilon(0.02));
}

TEST_CASE("exact enumeration of the n=100 binomial against half-lines") {
    SimulationConfig cfg;
    cfg.spec = {SummandKind::RademacherAxes, 1, 100, 0.5};
    cfg.sets = halfline_family(512, -4.0, 4.0);
    cfg.seed = 3;
    cfg.k_constant = 29.3;
    const SimulationReport rep = run_simulation(cfg);
    CHECK(rep.exact);
    CHECK(rep.samples_used == 101);
    CHECK(rep.sup_error <= exact_kolmogorov_halfline(100) + 1e-12);
    CHECK(rep.sup_error > 0.035);
    CHECK(rep.bound == Catch::Approx(2.93).margin(1e-12));
    CHECK(rep.pass);
    for (const SetReport& s : rep.sets) CHECK(s.half_width == 0.0);
}

TEST_CASE("verdicts pass for all kinds across dimensions") {
    for (SummandKind kind : {SummandKind::RademacherAxes, SummandKind::UniformSphere,
                             SummandKind::TwoPointAsymmetric}) {
        for (int d : {1, 2, 3}) {
            for (long n : {16L, 64L}) {
                SimulationConfig cfg;
                cfg.spec = {kind, d, n, 0.3};
                cfg.sets = halfspace_family(d, 24, 17);
                const auto balls = ball_family(d, 12);
                cfg.sets.insert(cfg.sets.end(), balls.begin(), balls.end());
                cfg.samples = 40000;
                cfg.seed = 1234;
                const SimulationReport rep = run_simulation(cfg);
                INFO(summand_kind_name(kind) << " d=" << d << " n=" << n);
                CHECK(rep.pass);
                CHECK(rep.lyapunov_sum == Catch::Approx(cfg.spec.lyapunov_sum()).margin(1e-14));
            }
        }
    }
}

TEST_CASE("error decreases when n scales fourfold") {
    for (SummandKind kind : {SummandKind::RademacherAxes, SummandKind::TwoPointAsymmetric}) {
        SimulationConfig cfg;
        cfg.spec = {kind, 1, 64, 0.3};
        cfg.sets = halfline_family(128, -3.0, 3.0);
        cfg.seed = 5;
        const SimulationReport small = run_simulation(cfg);
        cfg.spec.n = 256;
        const SimulationReport big = run_simulation(cfg);
        REQUIRE(small.exact);
        REQUIRE(big.exact);
        CHECK(big.sup_error < small.sup_error);
        CHECK(big.sup_error < 0.75 * small.sup_error);
    }
    // Uniform sphere goes through sampling; allow 3 half-widths of noise.
    SimulationConfig cfg;
    cfg.spec = {SummandKind::UniformSphere, 2, 32, 0.5};
    cfg.sets = halfspace_family(2, 16, 9);
    cfg.samples = 60000;
    cfg.seed = 21;
    const SimulationReport small = run_simulation(cfg);
    cfg.spec.n = 128;
    const SimulationReport big = run_simulation(cfg);
    CHECK(big.sup_error <= small.sup_error + 3.0 * (big.sup_half_width + small.sup_half_width));
}

TEST_CASE("simulation is deterministic given the seed") {
    SimulationConfig cfg;
    cfg.spec = {SummandKind::UniformSphere, 2, 16, 0.5};
    cfg.sets = ball_family(2, 8);
    cfg.samples = 20000;
    cfg.seed = 99;
    const std::string a = report_to_json(run_simulation(cfg)).dump();
    const std::string b = report_to_json(run_simulation(cfg)).dump();
    CHECK(a == b);
    cfg.seed = 100;
    const std::string c = report_to_json(run_simulation(cfg)).dump();
    CHECK(a != c);
}

TEST_CASE("config validation") {
    SimulationConfig cfg;
    cfg.spec = {SummandKind::UniformSphere, 2, 16, 0.5};
    cfg.sets = {TestSet::ball({0.0, 0.0}, 1.0)};
    cfg.samples = 100;  // below the sampling floor
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.samples = 10000;
    cfg.exact = true;  // continuous law cannot enumerate
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.exact.reset();
    cfg.sets = {TestSet::ball({0.0}, 1.0)};  // dimension mismatch
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("annulus inequality for balls matches the analytic perimeter") {
    const TestSet A = TestSet::ball({0.0, 0.0, 0.0}, 1.0);
    PerimeterQuery q;
    q.d = 3;
    const double gbar = gamma_bar_d(q).gamma_bar;
    const AnnulusReport rep =
        annulus_inequality_check(A, 1.0, {0.0, 0.0, 0.0}, {0.01, 0.001}, gbar);
    CHECK(rep.all_ok);
    // Small-eps outer ratio approaches the boundary integral.
    const double peri = analytic_perimeter(Shape::BallRadius, 1.0, 3);
    CHECK(rep.entries.back().outer / 0.001 == Catch::Approx(peri).epsilon(0.01));
}

TEST_CASE("annulus inequality for a scaled shifted half-space is exact") {
    const TestSet A = TestSet::half_space({1.0, 0.0}, 0.3);
    const AnnulusReport rep = annulus_inequality_check(A, 0.5, {0.4, -1.0}, {0.5, 0.1, 0.01},
                                                       1.0 / std::sqrt(2.0 * M_PI));
    CHECK(rep.all_ok);
    for (const AnnulusEntry& e : rep.entries) {
        CHECK(e.half_width == 0.0);
        // Half-space annuli: Phi((b - mu + eps)/sigma) - Phi((b - mu)/sigma).
        const double z = (0.3 - 0.4) / 0.5;
        const double outer = normal_cdf(z + e.eps / 0.5) - normal_cdf(z);
        CHECK(e.outer == Catch::Approx(outer).margin(1e-12));
    }
}

TEST_CASE("annulus inequality for the two-interval example set against the class bound") {
    const TestSet A = TestSet::interval_union({{-1.0, 0.0}, {3.0, 4.0}}, 4.0);
    std::vector<double> eps;
    for (int k = 1; k <= 12; ++k) eps.push_back(std::pow(2.0, -k));
    const AnnulusReport rep =
        annulus_inequality_check(A, 1.0, {0.0}, eps, interval_union_perimeter_bound(4.0));
    CHECK(rep.all_ok);
    CHECK(rep.worst_ratio <= interval_union_perimeter_bound(4.0));
}

TEST_CASE("annulus check on a mc path stays within its margin") {
    const TestSet A = TestSet::ball({0.4, 0.0}, 1.2);  // off-center: no closed form
    const AnnulusReport rep =
        annulus_inequality_check(A, 0.8, {0.0, 0.0}, {0.2, 0.05}, 1.0, 100000, 31);
    for (const AnnulusEntry& e : rep.entries) CHECK(e.half_width > 0.0);
    CHECK(rep.all_ok);
}

TEST_CASE("config and report serialization round-trips") {
    SimulationConfig cfg;
    cfg.spec = {SummandKind::TwoPointAsymmetric, 2, 30, 0.7};
    cfg.sets = {TestSet::ball({0.1, -0.2}, 1.5), TestSet::half_space({0.6, 0.8}, -0.4)};
    cfg.samples = 12000;
    cfg.seed = 77;
    cfg.k_constant = 31.0;
    const json j = config_to_json(cfg);
    const SimulationConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(back.spec.p == cfg.spec.p);
    CHECK(back.sets.size() == 2);

    const SimulationReport rep = run_simulation(cfg);
    const json jr = report_to_json(rep);
    CHECK(jr.at("pass").get<bool>() == rep.pass);
    const std::string csv = report_to_csv(rep);
    CHECK(csv.find("label,p_hat,p_normal,abs_error,half_width\n") == 0);
    CHECK(csv.find("ball(r=1.5)") != std::string::npos);
}

TEST_CASE("wilson half-width sanity") {
    CHECK(wilson_half_width_99(0, 0) == 1.0);
    const double hw = wilson_half_width_99(5000, 10000);
    CHECK(hw == Catch::Approx(2.5758 * 0.005).epsilon(0.01));
    CHECK(wilson_half_width_99(0, 10000) < hw);
}
