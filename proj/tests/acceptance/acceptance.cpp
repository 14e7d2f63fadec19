// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 only if all pass.
#include "modloc/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace modloc;
using nlohmann::json;

namespace {

// thresholds
constexpr double round_trip_eps       = 1e-8;
constexpr double modular_identity_tol = 1e-10;
constexpr double round_trip_seconds   = 10.0;
constexpr double sphere_rep_tol       = 1e-12;
constexpr double sphere_exact_tol     = 1e-10;
constexpr double bw_tol               = 1e-3;
constexpr double bw_seconds           = 60.0;
constexpr double isotony_tol          = 1e-6;
constexpr double violation_floor      = 0.1;
constexpr double weyl_tol             = 1e-6;
constexpr double vacuum_tol           = 1e-10;
constexpr double haag_tol             = 1e-9;
constexpr double haag_floor           = 1e-12;

ExperimentConfig config(const json &model, const std::string &probe, const json &params) {
    return parse_config({{"schema_version", 1}, {"model", model}, {"seed", 1}, {"experiments", {{{"probe", probe}, {"params", params}}}}});
}

const json rapidity64{{"variant", "rapidity"}, {"m", 1.0}, {"N", 64}, {"sigma", 0.3}};

struct Outcome {
    bool        pass = true;
    std::string detail;
    void        need(bool ok, const std::string &what) {
        pass = pass && ok;
        if(!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [failed]");
    }
};

std::string num(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

const Check &find(const ExperimentResult &r, const std::string &name) {
    for(const auto &c : r.checks)
        if(c.name == name) return c;
    throw Error("missing check " + name);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion_round_trip(ExperimentResult &rt, double elapsed) {
    Outcome o;
    const auto &r = find(rt, "round_trip");
    o.need(r.status == "pass" && r.residual && *r.residual <= round_trip_eps, "round trip " + num(*r.residual));
    for(const char *n : {"delta_inversion", "tomita_square"}) {
        const auto &c = find(rt, n);
        o.need(c.residual && *c.residual < modular_identity_tol, std::string(n) + " " + num(*c.residual));
    }
    o.need(elapsed < round_trip_seconds, "runtime " + num(elapsed) + " s");
    return o;
}

Outcome criterion_duality(ExperimentResult &rt) {
    Outcome     o;
    const auto &d = find(rt, "dual_modular_data");
    o.need(d.residual && *d.residual < modular_identity_tol, "K' modular data " + num(*d.residual));
    const auto &j = find(rt, "j_maps_to_complement");
    o.need(j.status == "pass", "J K = K' " + num(*j.residual));
    return o;
}

Outcome criterion_sphere() {
    Outcome o;
    auto    cfg = config({{"variant", "sphere"}}, "sphere", {{"j", {1, 2, 3}}, {"representation_threshold", sphere_rep_tol}, {"exact_threshold", sphere_exact_tol}});
    auto    r   = run_probe("sphere", cfg.experiments[0].params, cfg);
    for(const auto &c : r.checks) {
        std::string what = c.name;
        if(c.residual) what += " " + num(*c.residual);
        if(!c.dims.is_null()) what += " k=" + c.dims["k_real_dim"].dump() + " center=" + c.dims["center_real_dim"].dump() + " meet=" + c.dims["hemisphere_meet_real_dim"].dump();
        o.need(c.status == "pass", what);
    }
    return o;
}

Outcome criterion_bw() {
    Outcome o;
    auto    t0  = std::chrono::steady_clock::now();
    auto    cfg = config(rapidity64, "bw", {{"N", {32, 64, 128}}, {"threshold", bw_tol}});
    auto    r   = run_probe("bw", cfg.experiments[0].params, cfg);
    double  el  = seconds_since(t0);
    std::string med;
    for(const auto &row : r.data["by_N"]) med += (med.empty() ? "" : "/") + num(row["median"].get<double>());
    const auto &mx = find(r, "bw_residual_at_largest_N");
    o.need(mx.status == "pass", "max at N=128 " + num(*mx.residual));
    o.need(find(r, "bw_median_non_increasing").status == "pass", "median " + med);
    o.need(el < bw_seconds, "runtime " + num(el) + " s");
    return o;
}

Outcome criterion_isotony() {
    Outcome o;
    struct Case {
        const char *label;
        json        params;
    };
    const Case cases[] = {
        {"plain a=(0,1)", {{"N", 64}, {"a", {0.0, 1.0}}, {"mode", "plain"}, {"expect", "isotony"}, {"threshold", isotony_tol}}},
        {"plain a=(0,-1)", {{"N", 64}, {"a", {0.0, -1.0}}, {"mode", "plain"}, {"expect", "violation"}, {"threshold", violation_floor}}},
        {"twisted a=(0,1)", {{"N", 64}, {"a", {0.0, 1.0}}, {"mode", "twisted"}, {"expect", "violation"}, {"threshold", violation_floor}}},
    };
    for(const auto &c : cases) {
        auto cfg = config(rapidity64, "isotony", c.params);
        auto r   = run_probe("isotony", c.params, cfg);
        o.need(r.checks.at(0).status == "pass", std::string(c.label) + " residual " + num(*r.checks.at(0).residual));
    }
    return o;
}

Outcome criterion_strip() {
    Outcome o;
    json    p{{"N", 64}, {"a", {-0.5, 0.5}}};
    auto    cfg = config(rapidity64, "strip", p);
    auto    r   = run_probe("strip", p, cfg);
    const auto &c = r.checks.at(0);
    o.need(c.status == "pass", "verdict " + c.dims["verdict"].get<std::string>() + ", cyclic defect " + c.dims["cyclic_defect"].dump() +
                                   ", separating defect " + c.dims["separating_defect"].dump() + ", meet dim " + c.dims["meet_real_dim"].dump());
    return o;
}

Outcome criterion_weyl() {
    Outcome o;
    json    p{{"n", 2}, {"N_max", 12}, {"pairs", 50}, {"radius", 0.5}, {"threshold", weyl_tol}, {"vacuum_threshold", vacuum_tol}};
    auto    cfg = config({{"variant", "trivial"}}, "weyl", p);
    auto    r   = run_probe("weyl", p, cfg);
    for(const char *n : {"weyl_relation", "weyl_vacuum"}) {
        const auto &c = find(r, n);
        o.need(c.status == "pass", std::string(n) + " " + num(*c.residual));
    }
    const auto &s = find(r, "cyclicity_standard");
    o.need(s.status == "pass" && s.dims["rank"] == 3, "standard rank " + s.dims["rank"].dump());
    const auto &d = find(r, "cyclicity_deficient");
    o.need(d.status == "pass", "deficient rank " + d.dims["rank"].dump() + "/" + d.dims["fock_dim"].dump());
    return o;
}

Outcome criterion_haag() {
    Outcome o;
    json    p{{"N", {32, 64, 128}}, {"N_gate", 64}, {"threshold", haag_tol}, {"roundoff_floor", haag_floor}};
    auto    cfg = config(rapidity64, "haag", p);
    auto    r   = run_probe("haag", p, cfg);
    const auto &h = find(r, "haag_duality");
    o.need(h.status == "pass", "residual at N=64 " + num(*h.residual) + ", dim K_O " + h.dims["k_o_real_dim"].dump());
    const auto &t = find(r, "haag_trend");
    o.need(t.status == "pass", "trend " + t.detail["residuals"].dump());
    return o;
}

Outcome criterion_determinism() {
    Outcome o;
    auto    cfg = parse_config({{"schema_version", 1},
                                {"model", rapidity64},
                                {"seed", 42},
                                {"experiments",
                                 {{{"probe", "round_trip"}, {"params", {{"samples", 20}}}},
                                  {{"probe", "strip"}, {"params", {{"N", 32}}}},
                                  {{"probe", "weyl"}, {"params", {{"pairs", 10}}}},
                                  {{"probe", "sphere"}, {"params", {{"j", {1, 2}}}}},
                                  {{"probe", "round_trip"}, {"params", {{"samples", 4}}}, {"sweep", {{"param", "n_max"}, {"values", {2, 4}}}}}}}});
    auto    a   = run_config(cfg, 1);
    auto    b   = run_config(cfg, 3);
    std::string ra = a.report.dump(2), rb = b.report.dump(2);
    bool        same_tables = a.tables.size() == b.tables.size();
    for(std::size_t i = 0; same_tables && i < a.tables.size(); ++i) same_tables = a.tables[i].content == b.tables[i].content && a.tables[i].name == b.tables[i].name;
    o.need(ra == rb, "report bytes " + std::to_string(ra.size()));
    o.need(same_tables, "csv tables " + std::to_string(a.tables.size()));
    return o;
}

} // namespace

int main() {
    int failed = 0;
    auto report = [&](int id, const char *name, const Outcome &o) {
        std::cout << "criterion " << id << " " << name << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
        if(!o.pass) ++failed;
    };
    auto guarded = [&](int id, const char *name, auto &&fn) {
        try {
            report(id, name, fn());
        } catch(const std::exception &e) {
            Outcome o;
            o.need(false, std::string("error: ") + e.what());
            report(id, name, o);
        }
    };

    json rt_params{{"samples", 100}, {"n_min", 2}, {"n_max", 8}, {"eps_rank", round_trip_eps}, {"threshold", modular_identity_tol}};
    auto rt_cfg = config(rapidity64, "round_trip", rt_params);
    std::optional<ExperimentResult> rt;
    double                          rt_seconds = 0;
    try {
        auto t0    = std::chrono::steady_clock::now();
        rt         = run_probe("round_trip", rt_params, rt_cfg);
        rt_seconds = seconds_since(t0);
    } catch(const std::exception &e) {
        std::cerr << "round trip probe: " << e.what() << "\n";
    }
    guarded(1, "round trip", [&] {
        if(!rt) throw Error("probe did not run");
        return criterion_round_trip(*rt, rt_seconds);
    });
    guarded(2, "duality", [&] {
        if(!rt) throw Error("probe did not run");
        return criterion_duality(*rt);
    });
    guarded(3, "sphere toy exactness", criterion_sphere);
    guarded(4, "Bisognano-Wichmann", criterion_bw);
    guarded(5, "positivity and isotony", criterion_isotony);
    guarded(6, "lightlike strip standardness", criterion_strip);
    guarded(7, "Fock space and Weyl operators", criterion_weyl);
    guarded(8, "Haag duality for double cones", criterion_haag);
    guarded(9, "determinism", criterion_determinism);
    std::cout << (9 - failed) << "/9 criteria pass" << std::endl;
    return failed ? 1 : 0;
}
