#pragma once

// JSON and CSV emission for the artifact types. JSON schemas round-trip;
// CSV uses '.' decimals and no thousands separators.

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "constants.hpp"
#include "geometry.hpp"
#include "monte_carlo.hpp"
#include "perimeter.hpp"

namespace clbound {

using json = nlohmann::json;

inline std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// TestSet
// ---------------------------------------------------------------------------

inline json set_to_json(const TestSet& A) {
    switch (A.kind()) {
        case SetKind::HalfSpace:
            return {{"type", "half-space"}, {"normal", A.normal()}, {"offset", A.offset()}};
        case SetKind::Ball:
            return {{"type", "ball"}, {"center", A.center()}, {"radius", A.radius()}};
        case SetKind::IntervalUnion: {
            json ivs = json::array();
            for (const Interval& iv : A.intervals()) ivs.push_back({iv.lo, iv.hi});
            return {{"type", "interval-union"}, {"intervals", ivs}, {"delta", A.delta()}};
        }
    }
    throw std::logic_error("set_to_json: unhandled variant");
}

inline TestSet set_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "half-space")
        return TestSet::half_space(j.at("normal").get<std::vector<double>>(),
                                   j.at("offset").get<double>());
    if (type == "ball")
        return TestSet::ball(j.at("center").get<std::vector<double>>(),
                             j.at("radius").get<double>());
    if (type == "interval-union") {
        std::vector<Interval> ivs;
        for (const auto& pair : j.at("intervals"))
            ivs.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
        return TestSet::interval_union(std::move(ivs), j.at("delta").get<double>());
    }
    throw std::invalid_argument("set_from_json: unknown type '" + type + "'");
}

// ---------------------------------------------------------------------------
// Simulation config / report
// ---------------------------------------------------------------------------

inline json spec_to_json(const SummandSpec& s) {
    json j{{"kind", summand_kind_name(s.kind)}, {"d", s.d}, {"n", s.n}};
    if (s.kind == SummandKind::TwoPointAsymmetric) j["p"] = s.p;
    return j;
}

inline SummandSpec spec_from_json(const json& j) {
    SummandSpec s;
    s.kind = summand_kind_from_name(j.at("kind").get<std::string>());
    s.d = j.at("d").get<int>();
    s.n = j.at("n").get<long>();
    if (j.contains("p")) s.p = j.at("p").get<double>();
    s.validate();
    return s;
}

inline json config_to_json(const SimulationConfig& c) {
    json sets = json::array();
    for (const TestSet& A : c.sets) sets.push_back(set_to_json(A));
    json j{{"spec", spec_to_json(c.spec)},
           {"sets", sets},
           {"samples", c.samples},
           {"seed", c.seed},
           {"k_constant", c.k_constant}};
    if (c.exact) j["exact"] = *c.exact;
    return j;
}

inline SimulationConfig config_from_json(const json& j) {
    SimulationConfig c;
    c.spec = spec_from_json(j.at("spec"));
    for (const auto& js : j.at("sets")) c.sets.push_back(set_from_json(js));
    if (j.contains("samples")) c.samples = j.at("samples").get<std::uint64_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("k_constant")) c.k_constant = j.at("k_constant").get<double>();
    if (j.contains("exact")) c.exact = j.at("exact").get<bool>();
    return c;
}

inline json report_to_json(const SimulationReport& r) {
    json sets = json::array();
    for (const SetReport& s : r.sets)
        sets.push_back({{"label", s.label},
                        {"p_hat", s.p_hat},
                        {"p_normal", s.p_normal},
                        {"abs_error", s.abs_error},
                        {"half_width", s.half_width}});
    return {{"spec", spec_to_json(r.spec)},
            {"exact", r.exact},
            {"samples_used", r.samples_used},
            {"seed", r.seed},
            {"sets", sets},
            {"sup_error", r.sup_error},
            {"sup_half_width", r.sup_half_width},
            {"sup_label", r.sup_label},
            {"lyapunov_sum", r.lyapunov_sum},
            {"k_constant", r.k_constant},
            {"bound", r.bound},
            {"pass", r.pass}};
}

inline std::string report_to_csv(const SimulationReport& r) {
    std::string out = "label,p_hat,p_normal,abs_error,half_width\n";
    for (const SetReport& s : r.sets) {
        out += s.label;
        out += ',';
        out += fmt_full(s.p_hat);
        out += ',';
        out += fmt_full(s.p_normal);
        out += ',';
        out += fmt_full(s.abs_error);
        out += ',';
        out += fmt_full(s.half_width);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constants / perimeter artifacts
// ---------------------------------------------------------------------------

inline json bundle_to_json(const ConstantBundle& b) {
    return {{"beta_star", b.beta_star}, {"sigma_star", b.sigma_star},
            {"c1", b.c1},               {"c3", b.c3},
            {"kappa", b.kappa},         {"gamma_star", b.gamma_star},
            {"gamma0", b.gamma0},       {"branch_floor", b.branch_floor},
            {"branch_main", b.branch_main}, {"k_value", b.k_value},
            {"affine", b.affine}};
}

inline json perimeter_result_to_json(const PerimeterResult& r) {
    return {{"d", r.d},
            {"gamma_bar", r.gamma_bar},
            {"p_star", r.p_star},
            {"r_star", r.r_star},
            {"inner_value", r.inner_value},
            {"evaluations", r.evaluations},
            {"r_at_lower_limit", r.r_at_lower_limit}};
}

inline PerimeterResult perimeter_result_from_json(const json& j) {
    PerimeterResult r;
    r.d = j.at("d").get<int>();
    r.gamma_bar = j.at("gamma_bar").get<double>();
    r.p_star = j.at("p_star").get<double>();
    r.r_star = j.at("r_star").get<double>();
    r.inner_value = j.at("inner_value").get<double>();
    r.evaluations = j.at("evaluations").get<long>();
    r.r_at_lower_limit = j.at("r_at_lower_limit").get<bool>();
    return r;
}

inline std::string perimeter_table_csv(const std::vector<PerimeterTableRow>& rows) {
    std::string out = "d,gamma_bar,gamma_bar_round3,ratio_d14,ratio_round3\n";
    for (const PerimeterTableRow& row : rows) {
        out += std::to_string(row.d);
        out += ',';
        out += fmt_full(row.gamma_bar);
        out += ',';
        out += fmt3(row.gamma_bar_rounded_up);
        out += ',';
        out += fmt_full(row.ratio);
        out += ',';
        out += fmt3(row.ratio_rounded_up);
        out += '\n';
    }
    return out;
}

inline json perimeter_table_json(const std::vector<PerimeterTableRow>& rows) {
    json arr = json::array();
    for (const PerimeterTableRow& row : rows)
        arr.push_back({{"d", row.d},
                       {"gamma_bar", row.gamma_bar},
                       {"gamma_bar_round3", row.gamma_bar_rounded_up},
                       {"ratio_d14", row.ratio},
                       {"ratio_round3", row.ratio_rounded_up},
                       {"near_round_boundary", row.near_round_boundary}});
    return arr;
}

// ---------------------------------------------------------------------------
// Audit / annulus artifacts
// ---------------------------------------------------------------------------

inline json audit_report_to_json(const AuditReport& r) {
    json viols = json::array();
    for (const AuditViolation& v : r.violations)
        viols.push_back(
            {{"assumption", v.assumption}, {"set_index", v.set_index}, {"detail", v.detail}});
    return {{"trials", r.trials}, {"checks", r.checks}, {"violations", viols}, {"ok", r.ok()}};
}

inline json annulus_report_to_json(const AnnulusReport& r) {
    json entries = json::array();
    for (const AnnulusEntry& e : r.entries)
        entries.push_back({{"eps", e.eps},
                           {"outer", e.outer},
                           {"inner", e.inner},
                           {"half_width", e.half_width},
                           {"bound", e.bound},
                           {"ok", e.ok}});
    return {{"entries", entries}, {"worst_ratio", r.worst_ratio}, {"all_ok", r.all_ok}};
}

// ---------------------------------------------------------------------------
// Atomic file write
// ---------------------------------------------------------------------------

inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::FILE* f = std::fopen(tmp.c_str(), "wb");
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        if (std::fwrite(content.data(), 1, content.size(), f) != content.size()) {
            std::fclose(f);
            std::remove(tmp.c_str());
            throw std::runtime_error("short write to " + tmp);
        }
        std::fclose(f);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
    }
}

}  // namespace clbound
