// Batch front door: tables, constant bundles, audits, and simulations.
// Exit codes: 0 success, 1 verification failure, 2 usage/config error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clbound/constants.hpp"
#include "clbound/geometry.hpp"
#include "clbound/monte_carlo.hpp"
#include "clbound/perimeter.hpp"
#include "clbound/serialize.hpp"
#include "clbound/stein.hpp"

namespace {

using clbound::json;

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content << (content.empty() || content.back() == '\n' ? "" : "\n");
    else
        clbound::write_file_atomic(out_path, content);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("bad config file " + path + ": " + e.what());
    }
}

std::vector<int> parse_dlist(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw std::invalid_argument("--dlist parsed to an empty list");
    return out;
}

int cmd_perimeter_table(const std::vector<int>& dims, const std::string& format,
                        const std::string& out_path) {
    std::vector<clbound::PerimeterTableRow> rows;
    rows.reserve(dims.size());
    for (int d : dims) {
        clbound::PerimeterQuery q;
        q.d = d;
        rows.push_back(clbound::perimeter_table_row(clbound::gamma_bar_d(q)));
    }
    if (format == "json")
        emit(out_path, clbound::perimeter_table_json(rows).dump(2));
    else
        emit(out_path, clbound::perimeter_table_csv(rows));
    return 0;
}

int cmd_constant(double gamma_star, double kappa, double beta_star, double gamma0, bool general,
                 const std::string& out_path) {
    const clbound::ConstantBundle b =
        general ? clbound::constant_bundle_general(gamma_star, kappa, beta_star, gamma0)
                : clbound::constant_bundle_affine(gamma_star, kappa, beta_star);
    emit(out_path, clbound::bundle_to_json(b).dump(2));
    return 0;
}

int cmd_smoothing_audit(std::uint64_t seed, long trials, bool negative_control,
                        const std::string& out_path) {
    std::printf("seed: %llu\n", static_cast<unsigned long long>(seed));
    clbound::AuditOptions opts;
    if (negative_control) opts.kappa_factor = 0.5;
    const int family_size = 10;
    const int per_set = static_cast<int>(std::max<long>(1000, trials / family_size));
    json out = json::array();
    bool violated = false;
    int idx = 0;
    for (const char* variant : {"half-space", "ball", "interval-union"}) {
        const auto family = clbound::random_family(variant, family_size, seed + idx);
        const clbound::AuditReport rep =
            clbound::assumption_audit(family, per_set, seed + idx, opts);
        json jr = clbound::audit_report_to_json(rep);
        jr["variant"] = variant;
        out.push_back(jr);
        violated = violated || !rep.ok();
        ++idx;
    }
    emit(out_path, out.dump(2));
    return violated ? 1 : 0;
}

int cmd_stein_check(const std::vector<long>& n_list, double gap_tol, const std::string& out_path) {
    json out = json::array();
    bool failed = false;
    for (const clbound::TestFunction& f :
         {clbound::tf_sin(), clbound::tf_tanh_cubic(), clbound::tf_bump()}) {
        for (long n : n_list) {
            const auto W = clbound::DiscreteSum::rademacher(static_cast<int>(n));
            const auto chk = clbound::slepian_identity_check(f, W);
            out.push_back({{"f", f.name},
                           {"n", n},
                           {"lhs", chk.lhs},
                           {"rhs", chk.rhs},
                           {"gap", chk.gap},
                           {"ok", chk.gap <= gap_tol}});
            failed = failed || chk.gap > gap_tol;
        }
    }
    emit(out_path, out.dump(2));
    return failed ? 1 : 0;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed_override, bool have_seed,
                 const std::string& format, const std::string& out_path) {
    clbound::SimulationConfig cfg = clbound::config_from_json(load_json_file(config_path));
    if (have_seed) cfg.seed = seed_override;
    cfg.validate();
    std::printf("seed: %llu\n", static_cast<unsigned long long>(cfg.seed));
    const clbound::SimulationReport rep = clbound::run_simulation(cfg);
    if (format == "csv")
        emit(out_path, clbound::report_to_csv(rep));
    else
        emit(out_path, clbound::report_to_json(rep).dump(2));
    return rep.pass ? 0 : 1;
}

int cmd_annulus_check(const std::string& config_path, std::uint64_t seed_override, bool have_seed,
                      const std::string& out_path) {
    const json j = load_json_file(config_path);
    const clbound::TestSet A = clbound::set_from_json(j.at("set"));
    const double sigma = j.at("sigma").get<double>();
    const auto mu = j.at("mu").get<std::vector<double>>();
    const auto eps = j.at("eps").get<std::vector<double>>();
    const double gbound = j.at("gamma_star_bound").get<double>();
    const std::uint64_t samples = j.value("samples", std::uint64_t(200000));
    std::uint64_t seed = j.value("seed", std::uint64_t(7));
    if (have_seed) seed = seed_override;
    std::printf("seed: %llu\n", static_cast<unsigned long long>(seed));
    const clbound::AnnulusReport rep =
        clbound::annulus_inequality_check(A, sigma, mu, eps, gbound, samples, seed);
    emit(out_path, clbound::annulus_report_to_json(rep).dump(2));
    return rep.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-perimeter bounds, Berry-Esseen constants, smoothing audits"};
    app.require_subcommand(1);

    // perimeter-table
    auto* sub_pt = app.add_subcommand("perimeter-table", "Compute the gamma_bar_d table");
    int pt_dmax = 0;
    std::string pt_dlist, pt_format = "csv", pt_out;
    sub_pt->add_option("--dmax", pt_dmax, "Compute d = 1..dmax");
    sub_pt->add_option("--dlist", pt_dlist, "Comma-separated dimension list");
    sub_pt->add_option("--format", pt_format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub_pt->add_option("--out", pt_out, "Output file (stdout if omitted)");

    // constant
    auto* sub_c = app.add_subcommand("constant", "Evaluate a Berry-Esseen constant bundle");
    double c_gamma_star = 0.0, c_kappa = 1.0, c_beta_star = 1.0 / 27.0, c_gamma0 = 0.0;
    bool c_affine = false, c_general = false;
    std::string c_out;
    sub_c->add_option("--gamma-star", c_gamma_star, "Perimeter-type constant gamma*")->required();
    sub_c->add_option("--kappa", c_kappa, "Curvature constant kappa")->required();
    sub_c->add_option("--beta-star", c_beta_star, "Branch threshold beta* (default 1/27)");
    sub_c->add_option("--gamma0", c_gamma0, "Annulus constant gamma_0 (general case)");
    sub_c->add_flag("--affine", c_affine, "Affine-invariant case");
    sub_c->add_flag("--general", c_general, "General (non-affine) case");
    sub_c->add_option("--out", c_out, "Output file (stdout if omitted)");

    // smoothing-audit
    auto* sub_a = app.add_subcommand("smoothing-audit", "Audit assumptions (A2)-(A8)");
    std::uint64_t a_seed = 0;
    long a_trials = 10000;
    bool a_neg = false;
    std::string a_out;
    sub_a->add_option("--seed", a_seed, "RNG seed")->required();
    sub_a->add_option("--trials", a_trials, "Trials per variant");
    sub_a->add_flag("--negative-control", a_neg, "Corrupt kappa to verify detection");
    sub_a->add_option("--out", a_out, "Output file (stdout if omitted)");

    // stein-check
    auto* sub_s = app.add_subcommand("stein-check", "Check the Slepian interpolation identity");
    std::vector<long> s_nlist{4, 8, 12};
    double s_gap_tol = 1e-4;
    std::string s_out;
    sub_s->add_option("--n", s_nlist, "Rademacher summand counts");
    sub_s->add_option("--gap-tol", s_gap_tol, "Maximum |lhs - rhs|");
    sub_s->add_option("--out", s_out, "Output file (stdout if omitted)");

    // simulate
    auto* sub_m = app.add_subcommand("simulate", "Run a Berry-Esseen simulation from JSON config");
    std::string m_config, m_format = "json", m_out;
    std::uint64_t m_seed = 0;
    sub_m->add_option("--config", m_config, "SimulationConfig JSON path")->required();
    auto* m_seed_opt = sub_m->add_option("--seed", m_seed, "Override config seed");
    sub_m->add_option("--format", m_format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub_m->add_option("--out", m_out, "Output file (stdout if omitted)");

    // annulus-check
    auto* sub_n = app.add_subcommand("annulus-check", "Check the non-standard annulus inequality");
    std::string n_config, n_out;
    std::uint64_t n_seed = 0;
    sub_n->add_option("--config", n_config, "Annulus config JSON path")->required();
    auto* n_seed_opt = sub_n->add_option("--seed", n_seed, "Override config seed");
    sub_n->add_option("--out", n_out, "Output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sub_pt->parsed()) {
            std::vector<int> dims;
            if (!pt_dlist.empty())
                dims = parse_dlist(pt_dlist);
            else if (pt_dmax >= 1)
                for (int d = 1; d <= pt_dmax; ++d) dims.push_back(d);
            else
                throw std::invalid_argument("one of --dmax or --dlist is required");
            return cmd_perimeter_table(dims, pt_format, pt_out);
        }
        if (sub_c->parsed()) {
            if (c_affine == c_general)
                throw std::invalid_argument("exactly one of --affine / --general is required");
            if (c_general && !(c_gamma0 > 0.0))
                throw std::invalid_argument("--general requires --gamma0 > 0");
            return cmd_constant(c_gamma_star, c_kappa, c_beta_star, c_gamma0, c_general, c_out);
        }
        if (sub_a->parsed()) return cmd_smoothing_audit(a_seed, a_trials, a_neg, a_out);
        if (sub_s->parsed()) return cmd_stein_check(s_nlist, s_gap_tol, s_out);
        if (sub_m->parsed())
            return cmd_simulate(m_config, m_seed, m_seed_opt->count() > 0, m_format, m_out);
        if (sub_n->parsed())
            return cmd_annulus_check(n_config, n_seed, n_seed_opt->count() > 0, n_out);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "verification failure: %s\n", e.what());
        return 1;
    }
    return 2;
}
