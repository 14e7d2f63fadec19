#include "modloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace modloc {

namespace {

const cplx I(0.0, 1.0);

using json = nlohmann::json;

const std::set<std::string> rapidity_probes{"bw", "isotony", "strip", "haag"};

Check gate(std::string name, std::string ref, std::optional<double> residual, double threshold, bool ok) {
    Check c;
    c.name      = std::move(name);
    c.paper_ref = std::move(ref);
    c.residual  = residual;
    c.threshold = threshold;
    c.status    = ok ? "pass" : "fail";
    c.strict_ok = ok;
    return c;
}

Check info(std::string name, std::string ref, std::optional<double> residual, double threshold, bool ok) {
    Check c  = gate(std::move(name), std::move(ref), residual, threshold, ok);
    c.status = "info";
    return c;
}

ModelSpec probe_model(const json &params, const ExperimentConfig &cfg) {
    ModelSpec m = cfg.model;
    if(params.contains("model")) {
        json merged = to_json(m);
        merged.update(params.at("model"));
        m = model_spec_from_json(merged);
    }
    return m;
}

RVector vec2(const json &j, const char *what) {
    auto x = j.get<std::vector<double>>();
    if(x.size() != 2) throw PreconditionError(std::string(what) + " must be a 2-vector");
    return (RVector(2) << x[0], x[1]).finished();
}

// first N in the list that is at least the gate size, for checks pinned to one compression
double max_of(const std::vector<double> &v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

double median_of(std::vector<double> v) {
    if(v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

bool non_increasing(const std::vector<double> &v, double floor = 0.0) {
    for(std::size_t i = 1; i < v.size(); ++i)
        if(v[i] > std::max(v[i - 1], floor)) return false;
    return true;
}

BumpFamilySpec bumps_for(const json &params, std::uint64_t seed) {
    BumpFamilySpec d;
    d.seed = seed;
    return params.contains("bumps") ? bump_family_from_json(params.at("bumps"), d) : d;
}

CVector random_ball(Eigen::Index n, double radius, Uniform01 &u) {
    CVector h(n);
    for(Eigen::Index i = 0; i < n; ++i) h[i] = cplx(2 * u() - 1, 2 * u() - 1);
    double r = radius * u();
    return h * (r / h.norm());
}

// ----------------------------------------------------------------------------------------------------------------------

ExperimentResult probe_round_trip(const json &p, const ExperimentConfig &cfg) {
    const int    samples = p.value("samples", 100);
    const int    n_min = p.value("n_min", 2), n_max = p.value("n_max", 8);
    const double eps   = p.value("eps_rank", 1e-8);
    const double thr   = p.value("threshold", 1e-10);
    const double cond  = p.value("cond_max", 50.0);
    if(n_min < 1 || n_max < n_min || samples < 1) throw PreconditionError("round_trip: invalid sample range");
    Uniform01  u(p.value("seed", cfg.seed));
    Tolerances tol = cfg.tolerances;
    tol.rank       = eps;

    double rt = 0, inv = 0, sq = 0, dj = 0, dd = 0, jk = 0;
    int    rt_fail = 0, jk_fail = 0;
    for(int s = 0; s < samples; ++s) {
        Eigen::Index n  = n_min + s % (n_max - n_min + 1);
        RealSubspace k  = random_standard_subspace(n, u, cond).with_eps(eps);
        ModularData  m  = modular_from_subspace(k, tol);
        RealSubspace k2 = subspace_from_modular(m, tol);
        rt              = std::max(rt, subspace_distance(k2, k));
        if(!subspace_equal(k2, k)) ++rt_fail;
        inv = std::max(inv, delta_inversion_residual(m));
        sq  = std::max(sq, tomita_square_residual(m));

        RealSubspace kp = symplectic_complement(k);
        ModularData  mp = modular_from_subspace(kp, tol);
        dj              = std::max(dj, (mp.J().matrix() - m.J().matrix()).cwiseAbs().maxCoeff());
        DenseOperator di = m.delta_power(-1.0);
        dd               = std::max(dd, (mp.delta() - di).norm() / di.norm());
        RealSubspace jkk = k.image(m.J());
        jk               = std::max(jk, subspace_distance(jkk, kp));
        if(!subspace_equal(jkk, kp)) ++jk_fail;
    }
    ExperimentResult r;
    r.checks.push_back(gate("round_trip", "K is recovered from its modular data", rt, eps, rt_fail == 0 && rt <= eps));
    r.checks.push_back(gate("delta_inversion", "J Delta J = Delta^-1", inv, thr, inv < thr));
    r.checks.push_back(gate("tomita_square", "S^2 = 1 on K + iK", sq, thr, sq < thr));
    r.checks.push_back(gate("dual_modular_data", "modular data of K' are (J, Delta^-1)", std::max(dj, dd), thr, std::max(dj, dd) < thr));
    r.checks.push_back(gate("j_maps_to_complement", "J K = K'", jk, eps, jk_fail == 0 && jk <= eps));
    r.data = {{"samples", samples}, {"n_range", {n_min, n_max}}, {"j_residual", dj}, {"delta_residual", dd}};
    return r;
}

ExperimentResult probe_sphere(const json &p, const ExperimentConfig &cfg) {
    const auto   js   = p.value("j", std::vector<int>{1, 2, 3});
    const double e    = p.value("E", cfg.model.E);
    const double rthr = p.value("representation_threshold", 1e-12);
    const double xthr = p.value("exact_threshold", 1e-10);
    ExperimentResult r;
    r.data["per_j"] = json::array();
    for(int j : js) {
        ModelSpec ms{"sphere", 1.0, 1, 1.0, j, e};
        LocalNet  net(build_model(ms, cfg.tolerances), cfg.tolerances);
        double    rep = 0;
        for(const auto &en : net.model().report.entries) rep = std::max(rep, en.residual);
        SphereWedge  w0;
        RealSubspace k   = net.wedge_space(w0);
        RealSubspace kp  = net.wedge_space(w0.complement());
        double       dua = subspace_distance(kp, symplectic_complement(k));
        RealSubspace c   = meet(k, symplectic_complement(k));
        std::optional<RealSubspace> acc;
        for(const auto &w : coordinate_hemispheres()) acc = acc ? meet(*acc, net.wedge_space(w)) : net.wedge_space(w);
        const std::string tag = "j=" + std::to_string(j);
        r.checks.push_back(gate("sphere_representation " + tag, "representation relations of the sphere model", rep, rthr, rep <= rthr));
        Check dims = gate("sphere_structure " + tag, "K_W0 of dimension 2j+1 with one-dimensional center, irreducible net", dua, xthr,
                          k.real_dim() == 2 * j + 1 && c.real_dim() == 1 && acc->real_dim() == 0 && dua <= xthr);
        dims.dims  = {{"k_real_dim", k.real_dim()}, {"expected_k_real_dim", 2 * j + 1}, {"center_real_dim", c.real_dim()}, {"hemisphere_meet_real_dim", acc->real_dim()}};
        r.checks.push_back(dims);
        r.data["per_j"].push_back({{"j", j}, {"representation_residual", rep}, {"duality_residual", dua}});
    }
    return r;
}

ExperimentResult probe_bw(const json &p, const ExperimentConfig &cfg) {
    ModelSpec    ms  = probe_model(p, cfg);
    const auto   ns  = p.value("N", std::vector<int>{32, 64, 128});
    const double thr = p.value("threshold", 1e-3);
    const auto   fam = bumps_for(p, cfg.seed);
    auto         bumps = sample_bumps_in_wedge(Wedge::standard(2), fam);
    ExperimentResult r;
    r.data["by_N"] = json::array();
    std::vector<double> med, mx;
    for(int n : ns) {
        ms.N              = n;
        BuiltModel    bm  = build_model(ms, cfg.tolerances);
        const auto   &rm  = std::get<RapidityModel>(bm.model);
        ModularData   md  = wedge_modular_data(bm.model, Wedge::standard(2), cfg.tolerances);
        RealSubspace  k   = subspace_from_modular(md, cfg.tolerances);
        std::optional<AntilinearOperator> s;
        try {
            s = md.tomita();
        } catch(const RangeError &) {
        }
        std::vector<double> d, t;
        for(const auto &b : bumps) {
            BwResidual res = bw_residual(k, mass_shell_embedding(rm, {b}), s);
            d.push_back(res.distance);
            t.push_back(res.tomita);
        }
        med.push_back(median_of(d));
        mx.push_back(max_of(d));
        json lit = std::isfinite(max_of(t)) ? json(max_of(t)) : json(nullptr);
        r.data["by_N"].push_back({{"N", n}, {"median", med.back()}, {"max", mx.back()}, {"tomita_max", lit}, {"residuals", d}});
    }
    double min_margin = 1e300;
    for(const auto &b : bumps) min_margin = std::min(min_margin, bump_margin(Wedge::standard(2), b));
    r.data["bump_family"] = to_json(fam);
    r.data["min_margin_widths"] = min_margin;
    r.checks.push_back(gate("bw_residual_at_largest_N", "one-particle Bisognano-Wichmann property", mx.empty() ? 0.0 : mx.back(), thr,
                            !mx.empty() && mx.back() < thr));
    r.checks.push_back(gate("bw_median_non_increasing", "BW residual converges with the compression", std::nullopt, 0.0, non_increasing(med)));
    return r;
}

ExperimentResult probe_isotony(const json &p, const ExperimentConfig &cfg) {
    ModelSpec ms = probe_model(p, cfg);
    ms.N         = p.value("N", ms.N);
    const std::string mode_s = p.value("mode", std::string("plain"));
    if(mode_s != "plain" && mode_s != "twisted") throw PreconditionError("isotony: mode must be plain or twisted");
    const std::string expect = p.value("expect", std::string("isotony"));
    if(expect != "isotony" && expect != "violation") throw PreconditionError("isotony: expect must be isotony or violation");
    const double thr = p.value("threshold", expect == "isotony" ? 1e-6 : 0.1);
    RVector      a   = p.contains("a") ? vec2(p.at("a"), "isotony translation") : (RVector(2) << 0.0, 1.0).finished();
    BuiltModel   bm  = build_model(ms, cfg.tolerances);
    IsotonyReport rep = isotony_probe(std::get<RapidityModel>(bm.model), Wedge::standard(2), a,
                                      mode_s == "plain" ? IsotonyMode::plain : IsotonyMode::twisted, bumps_for(p, cfg.seed),
                                      p.value("twist_scale", 1.0), cfg.tolerances);
    ExperimentResult r;
    const bool ok = expect == "isotony" ? rep.residual < thr : rep.residual > thr;
    Check      c  = gate("isotony_" + mode_s + (expect == "isotony" ? "" : "_violation"),
                         expect == "isotony" ? "positive energy implies U(a) K_W inside K_W" : "isotony fails without positivity or reflection covariance",
                         rep.residual, thr, ok);
    c.detail      = to_json(rep);
    r.checks.push_back(c);
    r.data = to_json(rep);
    return r;
}

ExperimentResult probe_strip(const json &p, const ExperimentConfig &cfg) {
    ModelSpec ms = probe_model(p, cfg);
    ms.N         = p.value("N", ms.N);
    RVector    a  = p.contains("a") ? vec2(p.at("a"), "strip translation") : (RVector(2) << -0.5, 0.5).finished();
    BuiltModel bm = build_model(ms, cfg.tolerances);
    StripReport rep = strip_standardness_probe(std::get<RapidityModel>(bm.model), a, cfg.tolerances);
    ExperimentResult r;
    Check c = gate("strip_standard", "K_W meet K_{W'+a} is standard for a lightlike strip", std::nullopt, 0.0,
                   rep.verdict.verdict == Standardness::standard && !rep.degenerate && !rep.strip_empty);
    c.dims  = {{"meet_real_dim", rep.meet_real_dim},
               {"cyclic_defect", rep.verdict.cyclic_defect},
               {"separating_defect", rep.verdict.separating_defect},
               {"verdict", to_string(rep.verdict.verdict)}};
    c.detail = to_json(rep);
    r.checks.push_back(c);
    r.data = to_json(rep);
    return r;
}

ExperimentResult probe_weyl(const json &p, const ExperimentConfig &cfg) {
    const int    n      = p.value("n", 2);
    const int    nmax   = p.value("N_max", 12);
    const int    pairs  = p.value("pairs", 50);
    const double radius = p.value("radius", 0.5);
    const double thr    = p.value("threshold", 1e-6);
    const double vthr   = p.value("vacuum_threshold", 1e-10);
    const double cthr   = p.value("covariance_threshold", 1e-7);
    Uniform01    u(p.value("seed", cfg.seed));
    ExperimentResult r;

    double weyl = 0, unit = 0, tail = 0, vac = 0;
    for(int s = 0; s < pairs; ++s) {
        CVector   h = random_ball(n, radius, u), k = random_ball(n, radius, u), g = random_ball(n, radius, u);
        FockState psi = coherent_vector(g, nmax);
        FockState lhs = weyl_apply(h, weyl_apply(k, psi));
        FockState rhs = weyl_apply(CVector(h + k), psi);
        weyl          = std::max(weyl, (lhs.components - weyl_multiplier(h, k) * rhs.components).norm());
        FockState vh  = weyl_apply(h, psi);
        unit          = std::max(unit, std::abs(vh.norm() - psi.norm()));
        tail          = std::max(tail, vh.tail);
        FockState v0  = weyl_apply(h, vacuum(n, nmax));
        CVector   ex  = std::exp(-0.25 * h.squaredNorm()) * coherent_vector(CVector(I * h / std::sqrt(2.0)), nmax).components;
        vac           = std::max(vac, (v0.components - ex).norm());
    }
    r.checks.push_back(gate("weyl_relation", "V(h)V(k) = exp(-(i/2) Im<h,k>) V(h+k)", weyl, thr, weyl < thr));
    r.checks.push_back(gate("weyl_vacuum", "V(h) e^0 = exp(-|h|^2/4) e^{ih/sqrt 2}", vac, vthr, vac < vthr));
    Check uc  = info("weyl_unitarity", "V(h) unitary within the truncation tail", unit, std::sqrt(tail) + 1e-14, unit <= std::sqrt(tail) + 1e-14);
    uc.detail = {{"max_tail", tail}};
    r.checks.push_back(uc);

    // second quantized modular covariance on coherent states
    RealSubspace k   = random_standard_subspace(n, u);
    ModularData  m   = modular_from_subspace(k, cfg.tolerances);
    const double t   = p.value("t", 0.3);
    auto         sqp = second_quantized_modular(m, nmax, t);
    auto         sqm = second_quantized_modular(m, nmax, -t);
    double       cov = 0;
    for(int s = 0; s < 10; ++s) {
        CVector   h = random_ball(n, radius, u), g = random_ball(n, radius, u);
        FockState psi = coherent_vector(g, nmax);
        FockState x   = psi;
        x.components  = sqm.gamma_delta_it * psi.components;
        x             = weyl_apply(h, x);
        CVector lhs   = sqp.gamma_delta_it * x.components;
        CVector rhs   = weyl_apply(CVector(m.delta_it(t) * h), psi).components;
        cov           = std::max(cov, (lhs - rhs).norm());
    }
    FockBasis basis(n, nmax);
    double    grading = grading_residual(sqp.gamma_delta_it, basis);
    r.checks.push_back(gate("second_quantized_covariance", "Gamma(Delta^it) V(h) Gamma(Delta^-it) = V(Delta^it h)", cov, cthr, cov < cthr && grading == 0.0));

    const int  seeds = p.value("cyclicity_seed", 1);
    auto       std1  = cyclicity_rank(RealSubspace::real_part(1), 9, 2, static_cast<std::uint64_t>(seeds), cfg.tolerances.rank);
    DenseOperator g1(2, 1);
    g1 << 1.0, 0.0;
    auto def = cyclicity_rank(RealSubspace::from_generators(g1), 36, 2, static_cast<std::uint64_t>(seeds), cfg.tolerances.rank);
    Check cs = gate("cyclicity_standard", "standard K gives a cyclic vacuum (n=1, N_max=2)", std::nullopt, 0.0, std1.full());
    cs.dims  = to_json(std1);
    r.checks.push_back(cs);
    Check cd = gate("cyclicity_deficient", "non-cyclic K gives a rank deficiency (K = R x {0})", std::nullopt, 0.0, !def.full());
    cd.dims  = to_json(def);
    r.checks.push_back(cd);
    r.data = {{"weyl_residual", weyl}, {"vacuum_residual", vac}, {"unitarity", unit}, {"covariance", cov}};
    return r;
}

ExperimentResult probe_haag(const json &p, const ExperimentConfig &cfg) {
    ModelSpec    ms    = probe_model(p, cfg);
    const auto   ns    = p.value("N", std::vector<int>{32, 64, 128});
    const int    ngate = p.value("N_gate", 64);
    const double thr   = p.value("threshold", 1e-9);
    const double floor = p.value("roundoff_floor", 1e-12);
    RVector      a     = p.contains("a") ? vec2(p.at("a"), "double cone a") : (RVector(2) << 0.0, -1.0).finished();
    RVector      b     = p.contains("b") ? vec2(p.at("b"), "double cone b") : (RVector(2) << 0.0, 1.0).finished();
    ExperimentResult r;
    r.data["by_N"] = json::array();
    std::vector<double> res;
    std::optional<HaagResult> at_gate;
    for(int n : ns) {
        ms.N = n;
        LocalNet   net(build_model(ms, cfg.tolerances), cfg.tolerances);
        HaagResult h = haag_duality(net, a, b);
        res.push_back(h.residual);
        if(n == ngate) at_gate = h;
        r.data["by_N"].push_back({{"N", n}, {"residual", h.residual}, {"k_o_real_dim", h.k_o_dim}, {"k_o_prime_real_dim", h.k_o_prime_dim}});
    }
    if(!at_gate) throw PreconditionError("haag: N_gate is not among the compression sizes");
    Check c = gate("haag_duality", "Haag duality K_O' = (K_O)' for double cones", at_gate->residual, thr, at_gate->residual < thr);
    c.dims  = {{"k_o_real_dim", at_gate->k_o_dim}, {"k_o_prime_real_dim", at_gate->k_o_prime_dim}, {"complement_real_dim", at_gate->complement_dim}};
    c.detail = {{"convergence_contract", "residual below threshold at N_gate, non-increasing over N above the round-off floor"},
                {"vacuous", at_gate->k_o_dim == 0}};
    r.checks.push_back(c);
    Check t  = gate("haag_trend", "Haag residual non-increasing over N", max_of(res), floor, non_increasing(res, floor));
    t.detail = {{"residuals", res}, {"N", ns}};
    r.checks.push_back(t);
    return r;
}

ExperimentResult probe_net_report(const json &p, const ExperimentConfig &cfg) {
    NetReportConfig nc;
    nc.seed = cfg.seed;
    nc      = net_report_config_from_json(p, nc);
    LocalNet  net(build_model(probe_model(p, cfg), cfg.tolerances), cfg.tolerances);
    NetReport rep = net_report(net, nc);
    ExperimentResult r;
    r.checks          = rep.checks;
    r.data["provenance"] = rep.provenance;
    return r;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> d)
    : Error([&] {
          std::string s = "invalid config:";
          for(const auto &x : d) s += "\n  " + x;
          return s;
      }()),
      diagnostics(std::move(d)) {}

const std::vector<std::string> &probe_names() {
    static const std::vector<std::string> names{"round_trip", "sphere", "bw", "isotony", "strip", "weyl", "haag", "net_report"};
    return names;
}

std::vector<std::string> validate_config(const json &j) {
    std::vector<std::string> d;
    if(!j.is_object()) return {"config must be a JSON object"};
    static const std::set<std::string> top{"schema_version", "model", "experiments", "tolerances", "seed", "outputs"};
    for(const auto &[k, v] : j.items())
        if(!top.count(k)) d.push_back("unknown key '" + k + "'");
    if(!j.contains("schema_version")) d.push_back("missing schema_version");
    else if(!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != schema_version)
        d.push_back("schema_version must be " + std::to_string(schema_version));
    std::string variant = "rapidity";
    if(j.contains("model")) {
        const auto &m = j["model"];
        if(!m.is_object()) d.push_back("model must be an object");
        else {
            static const std::set<std::string> keys{"variant", "m", "N", "sigma", "j", "E"};
            for(const auto &[k, v] : m.items()) {
                if(!keys.count(k)) d.push_back("model: unknown key '" + k + "'");
                else if(k == "variant" && !v.is_string()) d.push_back("model.variant must be a string");
                else if((k == "N" || k == "j") && !v.is_number_integer()) d.push_back("model." + k + " must be an integer");
                else if(k != "variant" && !v.is_number()) d.push_back("model." + k + " must be a number");
            }
            if(m.contains("variant") && m["variant"].is_string()) {
                variant = m["variant"].get<std::string>();
                if(variant != "rapidity" && variant != "sphere" && variant != "trivial") d.push_back("model.variant '" + variant + "' is not rapidity, sphere or trivial");
            }
            if(m.contains("N") && m["N"].is_number_integer() && m["N"].get<int>() < 1) d.push_back("model.N must be positive");
            if(m.contains("j") && m["j"].is_number_integer() && m["j"].get<int>() < 1) d.push_back("model.j must be positive");
            for(const char *k : {"m", "sigma"})
                if(m.contains(k) && m[k].is_number() && !(m[k].get<double>() > 0)) d.push_back(std::string("model.") + k + " must be positive");
        }
    }
    if(!j.contains("experiments")) d.push_back("missing experiments");
    else if(!j["experiments"].is_array()) d.push_back("experiments must be an array");
    else {
        int i = 0;
        for(const auto &e : j["experiments"]) {
            const std::string at = "experiments[" + std::to_string(i++) + "]";
            if(!e.is_object()) {
                d.push_back(at + " must be an object");
                continue;
            }
            for(const auto &[k, v] : e.items())
                if(k != "probe" && k != "params" && k != "sweep") d.push_back(at + ": unknown key '" + k + "'");
            if(!e.contains("probe") || !e["probe"].is_string()) {
                d.push_back(at + ": missing probe name");
                continue;
            }
            const auto probe = e["probe"].get<std::string>();
            if(std::find(probe_names().begin(), probe_names().end(), probe) == probe_names().end()) d.push_back(at + ": unknown probe '" + probe + "'");
            else if(rapidity_probes.count(probe)) {
                std::string pv = variant;
                if(e.contains("params") && e["params"].is_object() && e["params"].contains("model") && e["params"]["model"].contains("variant"))
                    pv = e["params"]["model"]["variant"].get<std::string>();
                if(pv != "rapidity") d.push_back(at + ": unsupported combination: probe '" + probe + "' with model '" + pv + "'");
            }
            if(e.contains("params") && !e["params"].is_object()) d.push_back(at + ": params must be an object");
            if(e.contains("sweep")) {
                const auto &s = e["sweep"];
                if(!s.is_object() || !s.contains("param") || !s["param"].is_string() || !s.contains("values") || !s["values"].is_array() ||
                   s["values"].empty())
                    d.push_back(at + ": sweep needs a param name and a non-empty values array");
            }
        }
    }
    if(j.contains("tolerances")) {
        const auto &t = j["tolerances"];
        if(!t.is_object()) d.push_back("tolerances must be an object");
        else
            for(const auto &[k, v] : t.items()) {
                if(k != "herm" && k != "spec" && k != "rank" && k != "pairing") d.push_back("tolerances: unknown key '" + k + "'");
                else if(!v.is_number() || !(v.get<double>() > 0)) d.push_back("tolerances." + k + " must be a positive number");
            }
    }
    if(j.contains("seed") && !(j["seed"].is_number_unsigned() || (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))) d.push_back("seed must be a non-negative integer");
    if(j.contains("outputs")) {
        const auto &o = j["outputs"];
        if(!o.is_object()) d.push_back("outputs must be an object");
        else
            for(const auto &[k, v] : o.items())
                if((k != "report" && k != "csv_prefix") || !v.is_string()) d.push_back("outputs: '" + k + "' must be report or csv_prefix with a string value");
    }
    return d;
}

ExperimentConfig parse_config(const json &j) {
    auto diag = validate_config(j);
    if(!diag.empty()) throw ConfigError(diag);
    ExperimentConfig c;
    c.schema_version = j["schema_version"].get<int>();
    if(j.contains("model")) c.model = model_spec_from_json(j["model"]);
    for(const auto &e : j["experiments"]) {
        ExperimentSpec s;
        s.probe = e["probe"].get<std::string>();
        if(e.contains("params")) s.params = e["params"];
        if(e.contains("sweep")) s.sweep = SweepAxis{e["sweep"]["param"].get<std::string>(), e["sweep"]["values"].get<std::vector<json>>()};
        c.experiments.push_back(std::move(s));
    }
    if(j.contains("tolerances")) c.tolerances = tolerances_from_json(j["tolerances"]);
    if(j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if(j.contains("outputs")) {
        c.report_file = j["outputs"].value("report", c.report_file);
        c.csv_prefix  = j["outputs"].value("csv_prefix", c.csv_prefix);
    }
    return c;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if(!in) throw ConfigError({"cannot open config file '" + path + "'"});
    json j;
    try {
        in >> j;
    } catch(const json::parse_error &e) {
        throw ConfigError({std::string("JSON parse error: ") + e.what()});
    }
    return parse_config(j);
}

RealSubspace random_standard_subspace(Eigen::Index n, Uniform01 &u, double cond_max) {
    for(;;) {
        DenseOperator g(n, n);
        for(Eigen::Index c = 0; c < n; ++c)
            for(Eigen::Index r = 0; r < n; ++r) g(r, c) = cplx(2 * u() - 1, 2 * u() - 1);
        Eigen::JacobiSVD<DenseOperator> svd(g);
        const auto &s = svd.singularValues();
        if(s[n - 1] > 0 && s[0] / s[n - 1] <= cond_max) return RealSubspace::from_generators(g);
    }
}

ExperimentResult run_probe(const std::string &probe, const json &params, const ExperimentConfig &cfg) {
    if(probe == "round_trip") return probe_round_trip(params, cfg);
    if(probe == "sphere") return probe_sphere(params, cfg);
    if(probe == "weyl") return probe_weyl(params, cfg);
    if(probe == "net_report") return probe_net_report(params, cfg);
    if(rapidity_probes.count(probe)) {
        ModelSpec ms = probe_model(params, cfg);
        if(ms.variant != "rapidity") throw UnsupportedError("unsupported combination: probe '" + probe + "' with model '" + ms.variant + "'");
        if(probe == "bw") return probe_bw(params, cfg);
        if(probe == "isotony") return probe_isotony(params, cfg);
        if(probe == "strip") return probe_strip(params, cfg);
        return probe_haag(params, cfg);
    }
    throw ConfigError({"unknown probe '" + probe + "'"});
}

RunOutput run_config(const ExperimentConfig &cfg, int jobs, bool strict, bool sweeps_only) {
    struct Task {
        std::size_t               experiment;
        json                      params;
        std::optional<json>       sweep_value;
    };
    std::vector<Task> tasks;
    for(std::size_t i = 0; i < cfg.experiments.size(); ++i) {
        const auto &e = cfg.experiments[i];
        if(sweeps_only && !e.sweep) continue;
        if(e.sweep)
            for(const auto &v : e.sweep->values) {
                json p             = e.params;
                p[e.sweep->param]  = v;
                tasks.push_back({i, p, v});
            }
        else
            tasks.push_back({i, e.params, std::nullopt});
    }

    std::vector<ExperimentResult>   results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t>        next{0};
    auto worker = [&] {
        for(std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
            try {
                results[t] = run_probe(cfg.experiments[tasks[t].experiment].probe, tasks[t].params, cfg);
            } catch(...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    for(int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for(auto &th : pool) th.join();
    for(const auto &e : errors)
        if(e) std::rethrow_exception(e);

    RunOutput out;
    json      exps = json::array(), flat = json::array(), prov = json::array();
    std::size_t failed = 0, total = 0;
    for(std::size_t i = 0; i < cfg.experiments.size(); ++i) {
        const auto &e = cfg.experiments[i];
        json        runs = json::array();
        std::ostringstream csv;
        csv << std::setprecision(17);
        if(e.sweep) csv << e.sweep->param << ",check,residual,status\n";
        for(std::size_t t = 0; t < tasks.size(); ++t) {
            if(tasks[t].experiment != i) continue;
            json checks = json::array();
            for(const auto &c : results[t].checks) {
                json cj          = to_json(c);
                checks.push_back(cj);
                cj["experiment"] = i;
                if(tasks[t].sweep_value) cj["sweep_value"] = *tasks[t].sweep_value;
                flat.push_back(cj);
                ++total;
                if(check_failed(c, strict)) ++failed;
                if(e.sweep) {
                    csv << tasks[t].sweep_value->dump() << "," << c.name << ",";
                    if(c.residual && std::isfinite(*c.residual)) csv << *c.residual;
                    csv << "," << c.status << "\n";
                }
            }
            json run{{"checks", checks}, {"data", results[t].data}};
            if(tasks[t].sweep_value) run["sweep_value"] = *tasks[t].sweep_value;
            if(results[t].data.contains("provenance")) prov.push_back({{"experiment", i}, {"entries", results[t].data["provenance"]}});
            runs.push_back(run);
        }
        if(runs.empty()) continue;
        json ej{{"index", i}, {"probe", e.probe}, {"params", e.params}, {"runs", runs}};
        if(e.sweep) {
            ej["sweep"] = {{"param", e.sweep->param}, {"values", e.sweep->values}};
            out.tables.push_back({cfg.csv_prefix + "_" + std::to_string(i) + "_" + e.probe + ".csv", csv.str()});
        }
        exps.push_back(ej);
    }
    out.report = {{"schema_version", cfg.schema_version},
                  {"version", library_version},
                  {"seed", cfg.seed},
                  {"model_spec", to_json(cfg.model)},
                  {"tolerances", to_json(cfg.tolerances)},
                  {"experiments", exps},
                  {"checks", flat},
                  {"provenance", prov},
                  {"summary", {{"checks", total}, {"failed", failed}, {"strict", strict}, {"status", failed ? "fail" : "pass"}}}};
    out.exit_code = failed ? 2 : 0;
    return out;
}

std::string format_report(const json &report) {
    std::ostringstream os;
    os << report.value("version", std::string("?")) << "  seed " << report.value("seed", 0) << "\n";
    for(const auto &c : report.value("checks", json::array())) {
        std::string st = c.value("status", std::string("?"));
        for(auto &ch : st) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        os << std::left << std::setw(5) << st << " [" << c.value("experiment", 0) << "] " << c.value("name", std::string());
        if(c.contains("sweep_value")) os << " @" << c["sweep_value"].dump();
        if(c.contains("residual") && c["residual"].is_number()) os << "  residual " << std::setprecision(3) << std::scientific << c["residual"].get<double>() << std::defaultfloat;
        if(c.contains("dims")) os << "  dims " << c["dims"].dump();
        os << "\n";
    }
    if(report.contains("summary")) {
        const auto &s = report["summary"];
        os << s.value("checks", 0) << " checks, " << s.value("failed", 0) << " failed\n";
    }
    return os.str();
}

} // namespace modloc
