#include "modloc/net_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace modloc {

namespace {

std::string quantized(double x) {
    long long q = std::llround(x * 1e12);
    return std::to_string(q == 0 ? 0LL : q);
}

std::string sphere_wedge_key(const SphereWedge &w) {
    Eigen::Vector3d n = w.pole.normalized();
    return "H(" + quantized(n[0]) + "," + quantized(n[1]) + "," + quantized(n[2]) + ";" + quantized(w.time) + ")";
}

double basis_distance(const RealSubspace &inner, const RealSubspace &outer) {
    double        r  = 0.0;
    DenseOperator qb = inner.complex_basis();
    for(Eigen::Index c = 0; c < qb.cols(); ++c) r = std::max(r, outer.distance(qb.col(c)));
    return r;
}

double median(std::vector<double> v) {
    if(v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

bool non_increasing(const std::vector<double> &v) {
    for(std::size_t i = 1; i < v.size(); ++i)
        if(v[i] > v[i - 1]) return false;
    return true;
}

Check make_check(std::string name, std::string ref, std::optional<double> residual, double threshold, bool gated, bool ok) {
    Check c;
    c.name      = std::move(name);
    c.paper_ref = std::move(ref);
    c.residual  = residual;
    c.threshold = threshold;
    c.status    = gated ? (ok ? "pass" : "fail") : "info";
    c.strict_ok = ok;
    return c;
}

std::vector<Wedge> sample_wedges_2d() {
    RVector a(2), b(2);
    a << 0.3, 0.7;
    b << -0.2, 0.4;
    return {Wedge::standard(2), Wedge::standard(2).translated(a),
            transform_wedge(PoincareElement::translation(b) * PoincareElement::boost(2, 0.1), Wedge::standard(2)),
            Wedge::standard_complement(2)};
}

std::vector<Wedge> irreducibility_family_2d() {
    RVector l(2);
    l << 0.5, 0.5;
    return {Wedge::standard(2), Wedge::standard_complement(2), Wedge::standard(2).translated(l), Wedge::standard(2).translated(-l)};
}

} // namespace

nlohmann::json to_json(const Tolerances &t) {
    return {{"herm", t.herm}, {"spec", t.spec}, {"rank", t.rank}, {"pairing", t.pairing}};
}

Tolerances tolerances_from_json(const nlohmann::json &j, Tolerances d) {
    d.herm    = j.value("herm", d.herm);
    d.spec    = j.value("spec", d.spec);
    d.rank    = j.value("rank", d.rank);
    d.pairing = j.value("pairing", d.pairing);
    return d;
}

std::string canonical_key(const NetRegion &r) {
    if(auto reg = std::get_if<Region>(&r)) return reg->canonical_key();
    const auto              &s = std::get<SphereRegion>(r);
    std::vector<std::string> keys;
    for(const auto &w : s.wedges) keys.push_back(sphere_wedge_key(w));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::string out = "sphere";
    for(const auto &k : keys) out += ":" + k;
    return out;
}

nlohmann::json to_json(const NetRegion &r) {
    if(auto reg = std::get_if<Region>(&r)) return to_json(*reg);
    nlohmann::json ws = nlohmann::json::array();
    for(const auto &w : std::get<SphereRegion>(r).wedges)
        ws.push_back({{"pole", {w.pole[0], w.pole[1], w.pole[2]}}, {"time", w.time}});
    return {{"kind", "sphere_intersection"}, {"wedges", ws}};
}

RealSubspace LocalNet::compute(const NetRegion &r, ProvenanceEntry &prov) const {
    if(auto reg = std::get_if<Region>(&r)) {
        if(reg->kind == RegionKind::wedge) {
            prov.method = "direct";
            prov.family = {reg->canonical_key()};
            return subspace_from_modular(wedge_modular_data(model_.model, reg->wedges.front(), tol_), tol_);
        }
        CoveringFamily fam = covering_family(*reg);
        prov.method        = "meet";
        prov.exact_family  = fam.exact;
        std::optional<RealSubspace> acc;
        for(const auto &w : fam.wedges) {
            prov.family.push_back(Region::wedge(w).canonical_key());
            RealSubspace k = wedge_space(w);
            acc            = acc ? meet(*acc, k) : k;
        }
        return *acc;
    }
    const auto &s = std::get<SphereRegion>(r);
    if(s.wedges.empty()) throw UnsupportedError("local_space: empty sphere region");
    if(s.wedges.size() == 1) {
        prov.method = "direct";
        prov.family = {sphere_wedge_key(s.wedges.front())};
        return subspace_from_modular(wedge_modular_data(model_.model, s.wedges.front(), tol_), tol_);
    }
    prov.method = "meet";
    std::optional<RealSubspace> acc;
    for(const auto &w : s.wedges) {
        prov.family.push_back(sphere_wedge_key(w));
        RealSubspace k = wedge_space(w);
        acc            = acc ? meet(*acc, k) : k;
    }
    return *acc;
}

RealSubspace LocalNet::local_space(const NetRegion &r) const {
    const std::string key = canonical_key(r);
    {
        std::shared_lock lock(mu_);
        auto             it = cache_.find(key);
        if(it != cache_.end()) return it->second;
    }
    ProvenanceEntry prov;
    prov.key       = key;
    RealSubspace k = compute(r, prov);
    std::unique_lock lock(mu_);
    auto [it, inserted] = cache_.emplace(key, std::move(k));
    if(inserted) provenance_.emplace(key, std::move(prov));
    return it->second;
}

std::size_t LocalNet::cache_size() const {
    std::shared_lock lock(mu_);
    return cache_.size();
}

double LocalNet::wedge_consistency(const Wedge &w) const {
    RealSubspace direct = wedge_space(w);
    // K_C = meet of K_V over wedges V containing C; the minimal family of {W, W - a, ...} is {W}
    std::vector<Wedge> ws{w};
    if(w.d() == 2) {
        RVector a(2);
        for(double s : {0.5, 1.0}) {
            a << 0.0, w.right() ? s : -s;
            ws.push_back(w.translated(-a));
        }
    }
    CoveringFamily fam = covering_family(Region::general_intersection(ws));
    std::optional<RealSubspace> acc;
    for(const auto &v : fam.wedges) {
        RealSubspace k = subspace_from_modular(wedge_modular_data(model_.model, v, tol_), tol_);
        acc            = acc ? meet(*acc, k) : k;
    }
    return subspace_distance(*acc, direct);
}

IsotonyEntry LocalNet::record_inclusion(const NetRegion &inner, const NetRegion &outer) {
    IsotonyEntry e;
    e.inner    = canonical_key(inner);
    e.outer    = canonical_key(outer);
    e.residual = basis_distance(local_space(inner), local_space(outer));
    e.holds    = e.residual <= tol_.rank;
    inclusions_.emplace_back(inner, outer);
    isotony_.push_back(e);
    return e;
}

void LocalNet::set_tolerances(const Tolerances &tol) {
    {
        std::unique_lock lock(mu_);
        tol_ = tol;
        cache_.clear();
        provenance_.clear();
    }
    isotony_.clear();
    auto pairs = std::move(inclusions_);
    inclusions_.clear();
    for(const auto &[i, o] : pairs) record_inclusion(i, o);
}

LocalityResult LocalNet::locality(const NetRegion &r1, const NetRegion &r2) const {
    LocalityResult res;
    if(r1.index() != r2.index()) throw UnsupportedError("locality: regions of different kinds");
    if(auto a = std::get_if<Region>(&r1)) res.separated = separating_wedge(*a, std::get<Region>(r2)).has_value();
    else {
        for(const auto &w : std::get<SphereRegion>(r1).wedges)
            for(const auto &v : std::get<SphereRegion>(r2).wedges)
                if(sphere_wedge_key(w.complement()) == sphere_wedge_key(v)) res.separated = true;
    }
    if(!res.separated) return res;
    res.residual = basis_distance(local_space(r1), symplectic_complement(local_space(r2)));
    res.holds    = res.residual <= tol_.rank;
    return res;
}

nlohmann::json LocalNet::provenance() const {
    std::shared_lock lock(mu_);
    nlohmann::json   out = nlohmann::json::array();
    for(const auto &[key, p] : provenance_)
        out.push_back({{"key", key}, {"method", p.method}, {"family", p.family}, {"exact_family", p.exact_family},
                       {"real_dim", cache_.at(key).real_dim()}});
    return out;
}

NetReportConfig net_report_config_from_json(const nlohmann::json &j, NetReportConfig d) {
    d.duality_threshold     = j.value("duality_threshold", d.duality_threshold);
    d.covariance_threshold  = j.value("covariance_threshold", d.covariance_threshold);
    d.consistency_threshold = j.value("consistency_threshold", d.consistency_threshold);
    d.bw_threshold          = j.value("bw_threshold", d.bw_threshold);
    d.haag_threshold        = j.value("haag_threshold", d.haag_threshold);
    d.covariance_samples    = j.value("covariance_samples", d.covariance_samples);
    d.seed                  = j.value("seed", d.seed);
    if(j.contains("bumps")) d.bumps = bump_family_from_json(j.at("bumps"), d.bumps);
    if(j.contains("trend_N")) d.trend_N = j.at("trend_N").get<std::vector<int>>();
    auto vec2 = [](const nlohmann::json &v) {
        auto x = v.get<std::vector<double>>();
        if(x.size() != 2) throw PreconditionError("double cone apex must be a 2-vector");
        return RVector((RVector(2) << x[0], x[1]).finished());
    };
    if(j.contains("double_cone_a")) d.dc_a = vec2(j.at("double_cone_a"));
    if(j.contains("double_cone_b")) d.dc_b = vec2(j.at("double_cone_b"));
    return d;
}

nlohmann::json to_json(const NetReportConfig &c) {
    return {{"duality_threshold", c.duality_threshold},
            {"covariance_threshold", c.covariance_threshold},
            {"consistency_threshold", c.consistency_threshold},
            {"bw_threshold", c.bw_threshold},
            {"haag_threshold", c.haag_threshold},
            {"covariance_samples", c.covariance_samples},
            {"seed", c.seed},
            {"bumps", to_json(c.bumps)},
            {"trend_N", c.trend_N},
            {"double_cone_a", {c.dc_a[0], c.dc_a[1]}},
            {"double_cone_b", {c.dc_b[0], c.dc_b[1]}}};
}

nlohmann::json to_json(const Check &c) {
    nlohmann::json j{{"name", c.name}, {"paper_ref", c.paper_ref}};
    if(c.residual) j["residual"] = std::isfinite(*c.residual) ? nlohmann::json(*c.residual) : nlohmann::json(nullptr);
    if(!c.dims.is_null()) j["dims"] = c.dims;
    j["threshold"] = c.threshold;
    j["status"]    = c.status;
    if(c.status == "info") j["strict_ok"] = c.strict_ok;
    if(!c.detail.is_null()) j["detail"] = c.detail;
    return j;
}

bool check_failed(const Check &c, bool strict) { return c.status == "fail" || (strict && c.status == "info" && !c.strict_ok); }

HaagResult haag_duality(const LocalNet &net, const RVector &a, const RVector &b) {
    HaagResult   r;
    RealSubspace ko  = net.local_space(Region::double_cone_2d(a, b));
    // O' = (W1 + a)' u (W1' + b)' = (W1' + a) u (W1 + b)
    RealSubspace kop = join(net.wedge_space(Wedge::standard_complement(2).translated(a)), net.wedge_space(Wedge::standard(2).translated(b)));
    RealSubspace kc  = symplectic_complement(ko);
    r.residual       = subspace_distance(kop, kc);
    r.k_o_dim        = ko.real_dim();
    r.k_o_prime_dim  = kop.real_dim();
    r.complement_dim = kc.real_dim();
    return r;
}

SpectralGap spectral_gap(const ModularData &m, double tol) {
    SpectralGap g;
    g.min_gap = std::numeric_limits<double>::infinity();
    for(Eigen::Index i = 0; i < m.spectrum().eigenvalues.size(); ++i) {
        double d  = std::abs(std::expm1(m.spectrum().eigenvalues[i]));
        g.min_gap = std::min(g.min_gap, d);
        if(d <= tol) ++g.unit_eigenspace_dim;
    }
    return g;
}

NetReport net_report(LocalNet &net, const NetReportConfig &cfg) {
    NetReport       rep;
    const auto     &bm      = net.model();
    const auto     &variant = bm.spec.variant;
    const bool      rapid   = variant == "rapidity";
    const bool      sphere  = variant == "sphere";
    const Tolerances tol    = net.tolerances();

    {
        double worst = 0.0;
        bool   ok    = true;
        for(const auto &e : bm.report.entries) {
            worst = std::max(worst, e.residual);
            ok    = ok && e.residual <= e.threshold;
        }
        Check c  = make_check("representation_identities", "representation relations of the model", worst, 0.0, true, ok);
        c.detail = to_json(bm.report);
        rep.checks.push_back(c);
    }

    // (1) wedge duality
    {
        double         worst = 0.0;
        nlohmann::json per   = nlohmann::json::array();
        if(sphere) {
            for(const auto &w : coordinate_hemispheres()) {
                double r = subspace_distance(net.wedge_space(w.complement()), symplectic_complement(net.wedge_space(w)));
                worst    = std::max(worst, r);
                per.push_back({{"wedge", sphere_wedge_key(w)}, {"residual", r}});
            }
        } else {
            for(const auto &w : sample_wedges_2d()) {
                double r = subspace_distance(net.wedge_space(causal_complement(w)), symplectic_complement(net.wedge_space(w)));
                worst    = std::max(worst, r);
                per.push_back({{"wedge", Region::wedge(w).canonical_key()}, {"residual", r}});
            }
        }
        Check c  = make_check("wedge_duality", "wedge duality K_W' = (K_W)'", worst, cfg.duality_threshold, true, worst <= cfg.duality_threshold);
        c.detail = per;
        rep.checks.push_back(c);
    }

    // consistency of the intersected definition on wedges
    if(!sphere) {
        double r = net.wedge_consistency(Wedge::standard(2));
        rep.checks.push_back(make_check("wedge_consistency", "intersection over wedges containing W reproduces K_W", r, cfg.consistency_threshold, true,
                                        r <= cfg.consistency_threshold));
    }

    // (2) covariance; K_gW is built as U(g_W) K_W1, so on W1 this tests the construction and the stabilizer
    {
        Uniform01 u(cfg.seed);
        double    worst = 0.0, law = 0.0;
        for(int s = 0; s < cfg.covariance_samples; ++s) {
            if(sphere) {
                Eigen::Quaterniond qq(2 * u() - 1, 2 * u() - 1, 2 * u() - 1, 2 * u() - 1);
                qq.normalize();
                SphereGroupElement g{qq.toRotationMatrix(), 2 * u() - 1, false};
                SphereWedge        w = coordinate_hemispheres()[static_cast<std::size_t>(s) % 6];
                SphereWedge        gw{g.rotation * w.pole, w.time + g.time};
                RealSubspace       lhs = group_operator(bm.model, g).image(net.wedge_space(w));
                worst                  = std::max(worst, subspace_distance(lhs, net.wedge_space(gw)));
            } else {
                RVector a(2);
                a << 2 * u() - 1, 2 * u() - 1;
                double          t    = 0.4 * u() - 0.2;
                bool            refl = u() < 0.5;
                PoincareElement g    = PoincareElement::translation(a) * PoincareElement::boost(2, t);
                if(refl) g = g * PoincareElement::reflection(2);
                for(const auto &w : {Wedge::standard(2), Wedge::standard_complement(2)}) {
                    RealSubspace lhs = group_operator(bm.model, g).image(net.wedge_space(w));
                    worst            = std::max(worst, subspace_distance(lhs, net.wedge_space(transform_wedge(g, w))));
                }
                Wedge        w   = sample_wedges_2d()[1 + static_cast<std::size_t>(s) % 2];
                RealSubspace lhs = group_operator(bm.model, g).image(net.wedge_space(w));
                law              = std::max(law, subspace_distance(lhs, net.wedge_space(transform_wedge(g, w))));
            }
        }
        rep.checks.push_back(make_check("covariance", "covariance U(g) K_W = K_gW", worst, cfg.covariance_threshold, true, worst <= cfg.covariance_threshold));
        if(rapid) {
            // compressed translations exp(i M_a) do not commute exactly, so U(g) U(g_W) differs from U(g g_W)
            Check c  = make_check("compression_group_law", "covariance on wedges reached through two group elements", law, cfg.covariance_threshold,
                                  false, law <= cfg.covariance_threshold);
            c.detail = {{"metric", "largest principal sine"}};
            rep.checks.push_back(c);
        }
    }

    // (3) irreducibility over the configured family, and the trivial control
    {
        std::optional<RealSubspace> acc;
        nlohmann::json              fam = nlohmann::json::array();
        if(sphere) {
            for(const auto &w : coordinate_hemispheres()) {
                fam.push_back(sphere_wedge_key(w));
                acc = acc ? meet(*acc, net.wedge_space(w)) : net.wedge_space(w);
            }
        } else {
            for(const auto &w : irreducibility_family_2d()) {
                fam.push_back(Region::wedge(w).canonical_key());
                acc = acc ? meet(*acc, net.wedge_space(w)) : net.wedge_space(w);
            }
        }
        const bool expect_nonzero = variant == "trivial";
        const auto d              = acc->real_dim();
        Check      c = make_check("irreducibility", "net irreducibility: meet of K_W over a wedge family", std::nullopt, 0.0, true,
                                  expect_nonzero ? d > 0 : d == 0);
        c.dims   = {{"meet_real_dim", d}, {"expected", expect_nonzero ? "> 0" : "0"}};
        c.detail = {{"family", fam}};
        rep.checks.push_back(c);

        LocalNet     control(build_model(ModelSpec{"trivial"}), tol);
        RealSubspace kc = meet(meet(control.wedge_space(Wedge::standard(2)), control.wedge_space(Wedge::standard_complement(2))),
                               control.wedge_space(irreducibility_family_2d()[2]));
        Check        cc = make_check("irreducibility_control", "K_W independent of W for the trivial representation", std::nullopt, 0.0, true,
                                     kc.real_dim() > 0);
        cc.dims         = {{"meet_real_dim", kc.real_dim()}, {"expected", "> 0"}};
        rep.checks.push_back(cc);
    }

    // (4) factor classification
    {
        nlohmann::json per = nlohmann::json::array();
        bool           ok  = true;
        auto           add = [&](const std::string &key, const RealSubspace &k) {
            FactorReport f = factor_classify(k);
            per.push_back({{"wedge", key}, {"factor", f.factor}, {"center_real_dim", f.center_real_dim}});
            // one-particle factor iff K meet K' = 0; the sphere toy and the trivial control have a one-dimensional center
            ok = ok && (rapid ? f.factor : f.center_real_dim == 1);
        };
        if(sphere)
            for(const auto &w : coordinate_hemispheres()) add(sphere_wedge_key(w), net.wedge_space(w));
        else
            for(const auto &w : sample_wedges_2d()) add(Region::wedge(w).canonical_key(), net.wedge_space(w));
        Check c = make_check("factor_classification", "factoriality K_W meet K_W' = {0}", std::nullopt, 0.0, true, ok);
        c.dims  = per;
        rep.checks.push_back(c);
    }

    if(rapid) {
        // (5) Bisognano-Wichmann via mass-shell embeddings
        auto         bw_at = [&](const RapidityModel &r, const RealSubspace &k, std::optional<AntilinearOperator> s) {
            std::vector<double> d, t;
            for(const auto &b : sample_bumps_in_wedge(Wedge::standard(2), cfg.bumps)) {
                BwResidual res = bw_residual(k, mass_shell_embedding(r, {b}), s);
                d.push_back(res.distance);
                t.push_back(res.tomita);
            }
            return std::pair{d, t};
        };
        const auto  &r0 = std::get<RapidityModel>(bm.model);
        ModularData  d0 = wedge_modular_data(bm.model, Wedge::standard(2), tol);
        std::optional<AntilinearOperator> s0;
        try {
            s0 = d0.tomita();
        } catch(const RangeError &) {
        }
        auto [dist, tom] = bw_at(r0, net.wedge_space(Wedge::standard(2)), s0);
        double worst     = dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());
        Check  c = make_check("bisognano_wichmann", "modular data of W1 are the wedge boosts and reflection", worst, cfg.bw_threshold, true,
                              worst <= cfg.bw_threshold);
        nlohmann::json lit = nlohmann::json::array();
        for(double x : tom) lit.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr));
        c.detail = {{"metric", "relative distance of psi_f from K_W1"},
                    {"median", median(dist)},
                    {"bump_family", to_json(cfg.bumps)},
                    {"tomita_residuals", lit}};
        rep.checks.push_back(c);

        std::vector<double> med, gaps, haag;
        nlohmann::json      trend = nlohmann::json::array();
        bool                unit_empty = true;
        for(int n : cfg.trend_N) {
            ModelSpec sp = bm.spec;
            sp.N         = n;
            LocalNet  other(build_model(sp, tol), tol);
            const auto &rn = std::get<RapidityModel>(other.model().model);
            auto        [dn, tn] = bw_at(rn, other.wedge_space(Wedge::standard(2)), std::nullopt);
            SpectralGap g  = spectral_gap(wedge_modular_data(other.model().model, Wedge::standard(2), tol));
            HaagResult  hr = haag_duality(other, cfg.dc_a, cfg.dc_b);
            med.push_back(median(dn));
            gaps.push_back(g.min_gap);
            haag.push_back(hr.residual);
            unit_empty = unit_empty && g.unit_eigenspace_dim == 0;
            trend.push_back({{"N", n},
                             {"bw_median", med.back()},
                             {"min_gap", g.min_gap},
                             {"unit_eigenspace_dim", g.unit_eigenspace_dim},
                             {"haag_residual", hr.residual},
                             {"k_o_real_dim", hr.k_o_dim}});
        }
        Check bt  = make_check("bisognano_wichmann_trend", "median BW residual non-increasing in N", std::nullopt, 0.0, false, non_increasing(med));
        bt.detail = trend;
        rep.checks.push_back(bt);

        // (6) Haag duality for the double cone
        HaagResult hr = haag_duality(net, cfg.dc_a, cfg.dc_b);
        Check      hc = make_check("haag_duality", "Haag duality K_O' = (K_O)' for double cones", hr.residual, cfg.haag_threshold, true,
                                   hr.residual <= cfg.haag_threshold);
        hc.dims       = {{"k_o_real_dim", hr.k_o_dim}, {"k_o_prime_real_dim", hr.k_o_prime_dim}, {"complement_real_dim", hr.complement_dim}};
        hc.detail     = {{"residual_by_N", haag},
                         {"trend_non_increasing", non_increasing(haag)},
                         {"note", hr.k_o_dim == 0 ? "K_O is {0} at this compression; the identity reduces to K_O' = full space" : ""}};
        rep.checks.push_back(hc);

        // (7) spectral probe for the type III_1 criterion; a heuristic trend, finite matrices have pure point spectrum
        SpectralGap g  = spectral_gap(d0);
        Check       sc = make_check("spectral_gap_trend", "1 in the spectrum of Delta but not an eigenvalue (heuristic trend)", g.min_gap, 0.0,
                                    false, unit_empty && non_increasing(gaps));
        sc.dims        = {{"unit_eigenspace_dim", g.unit_eigenspace_dim}};
        sc.detail      = {{"min_gap_by_N", gaps}, {"N", cfg.trend_N}, {"heuristic", true}};
        rep.checks.push_back(sc);

        // locality and isotony on double cones
        RVector sh(2);
        sh << 0.0, 3.0;
        NetRegion o   = Region::double_cone_2d(cfg.dc_a, cfg.dc_b);
        NetRegion far = Region::wedge(Wedge::standard(2).translated(sh));
        LocalityResult lr = net.locality(o, far);
        Check lc = make_check("locality", "K_O1 inside (K_O2)' for spacelike separated regions", lr.residual, tol.rank, true, !lr.separated || lr.holds);
        lc.detail = {{"separated", lr.separated}};
        rep.checks.push_back(lc);

        RVector in_a = cfg.dc_a, in_b = cfg.dc_b;
        in_a[1] += 0.25;
        in_b[1] -= 0.25;
        net.record_inclusion(Region::double_cone_2d(in_a, in_b), o);
        net.record_inclusion(o, Region::wedge(Wedge::standard(2).translated(cfg.dc_a)));
    } else {
        SpectralGap g  = spectral_gap(sphere ? wedge_modular_data(bm.model, SphereWedge{}, tol) : wedge_modular_data(bm.model, Wedge::standard(2), tol));
        Check       sc = make_check("spectral_gap_trend", "1 in the spectrum of Delta but not an eigenvalue (heuristic trend)", g.min_gap, 0.0, false, true);
        sc.dims        = {{"unit_eigenspace_dim", g.unit_eigenspace_dim}};
        sc.detail      = {{"heuristic", true}, {"note", "no compression parameter; exact finite-dimensional model"}};
        rep.checks.push_back(sc);
        if(sphere) {
            SphereRegion north{{SphereWedge{}}};
            SphereRegion south{{SphereWedge{}.complement()}};
            LocalityResult lr = net.locality(north, south);
            Check lc = make_check("locality", "K_O1 inside (K_O2)' for spacelike separated regions", lr.residual, tol.rank, true, !lr.separated || lr.holds);
            lc.detail = {{"separated", lr.separated}};
            rep.checks.push_back(lc);
            net.record_inclusion(SphereRegion{{SphereWedge{}, SphereWedge{Eigen::Vector3d::UnitX()}}}, north);
        }
    }

    {
        double         worst = 0.0;
        bool           ok    = true;
        nlohmann::json led   = nlohmann::json::array();
        for(const auto &e : net.isotony_ledger()) {
            worst = std::max(worst, e.residual);
            ok    = ok && e.holds;
            led.push_back({{"inner", e.inner}, {"outer", e.outer}, {"residual", e.residual}, {"holds", e.holds}});
        }
        Check c  = make_check("isotony_ledger", "isotony K_R1 inside K_R2 for cached R1 inside R2", worst, tol.rank, false, ok);
        c.detail = led;
        rep.checks.push_back(c);
    }

    rep.provenance = net.provenance();
    return rep;
}

nlohmann::json to_json(const NetReport &r, const LocalNet &net, std::uint64_t seed) {
    nlohmann::json checks = nlohmann::json::array();
    for(const auto &c : r.checks) checks.push_back(to_json(c));
    return {{"model_spec", to_json(net.model().spec)},
            {"tolerances", to_json(net.tolerances())},
            {"checks", checks},
            {"provenance", r.provenance},
            {"seed", seed},
            {"version", library_version}};
}

} // namespace modloc
