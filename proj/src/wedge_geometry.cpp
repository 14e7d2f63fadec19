#include "modloc/wedge_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace modloc {

namespace {
    constexpr double two_pi = 2.0 * std::numbers::pi;

    RVector scaled_to_unit_time(RVector v) {
        double t = std::abs(v[0]);
        return t > 0 ? RVector(v / t) : v;
    }

    RVector lightcone_vec(Eigen::Index d, double x0, double x1) {
        RVector v = RVector::Zero(d);
        v[0]      = x0;
        v[1]      = x1;
        return v;
    }

    std::string hexfloat(double x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%a", x == 0.0 ? 0.0 : x);
        return buf;
    }

    std::string quantized(double x) {
        std::ostringstream os;
        os << std::llround(x * 1e12);
        return os.str();
    }

    std::optional<RVector> search_witness(const Wedge &inner, const Wedge &outer) {
        const Eigen::Index d    = inner.d();
        RVector            r1   = inner.ray(0), r2 = inner.ray(1);
        RMatrix            e    = inner.edge();
        double             base = 1.0 + inner.apex().norm() + outer.apex().norm();
        const double       mags[] = {1e-6, 1e-3, 1.0, 1e3, 1e6};
        std::vector<RVector> dirs{RVector::Zero(d)};
        for(Eigen::Index k = 0; k < e.cols(); ++k) {
            dirs.emplace_back(e.col(k));
            dirs.emplace_back(-e.col(k));
        }
        for(const auto &dir : dirs)
            for(double l1 : mags)
                for(double l2 : mags)
                    for(double m : mags) {
                        RVector x = inner.apex() + base * (l1 * r1 + l2 * r2 + m * dir);
                        if(inner.contains(x) && !outer.contains(x)) return x;
                    }
        return std::nullopt;
    }

    struct Box {
        double u_lo = -INFINITY, u_hi = INFINITY, v_lo = -INFINITY, v_hi = INFINITY;
    };

    Box lightcone_box(const Region &r) {
        Box b;
        for(const auto &w : r.wedges) {
            if(w.right()) {
                b.u_lo = std::max(b.u_lo, w.apex_u());
                b.v_hi = std::min(b.v_hi, w.apex_v());
            } else {
                b.u_hi = std::min(b.u_hi, w.apex_u());
                b.v_lo = std::max(b.v_lo, w.apex_v());
            }
        }
        return b;
    }

    Wedge wedge_2d(bool right, double u, double v) {
        RVector a(2);
        a << 0.5 * (u + v), 0.5 * (u - v);
        auto t = PoincareElement::translation(a);
        return right ? Wedge(t) : Wedge(t * PoincareElement::reflection(2));
    }

    std::string wedge_key(const Wedge &w) {
        if(w.d() == 2) return std::string(w.right() ? "R(" : "L(") + hexfloat(w.apex_u()) + "," + hexfloat(w.apex_v()) + ")";
        std::string k = "W(";
        for(int i = 0; i < 2; ++i) {
            RVector n = w.normal(i);
            for(Eigen::Index j = 0; j < n.size(); ++j) k += quantized(n[j]) + ",";
            k += quantized(minkowski(w.apex(), n)) + ";";
        }
        return k + ")";
    }
}

RMatrix minkowski_metric(Eigen::Index d) {
    RMatrix eta = -RMatrix::Identity(d, d);
    eta(0, 0)   = 1.0;
    return eta;
}

double minkowski(const RVector &x, const RVector &y) { return x[0] * y[0] - x.tail(x.size() - 1).dot(y.tail(y.size() - 1)); }

PoincareElement::PoincareElement(RMatrix lambda, RVector a) : lambda_(std::move(lambda)), a_(std::move(a)) {
    if(lambda_.rows() != lambda_.cols() || lambda_.rows() < 2 || a_.size() != lambda_.rows())
        throw DimensionError("Poincare element: expected d x d linear part and d-vector translation, d >= 2");
    double res = metric_residual();
    if(res > 1e-12) {
        std::ostringstream os;
        os << "Poincare element: linear part does not preserve the metric, residual " << res;
        throw PreconditionError(os.str(), res);
    }
    if(lambda_.determinant() <= 0.0) throw PreconditionError("Poincare element: improper linear part (det -1)");
}

double PoincareElement::metric_residual() const {
    RMatrix eta   = minkowski_metric(d());
    double  scale = std::max(1.0, lambda_.cwiseAbs().maxCoeff() * lambda_.cwiseAbs().maxCoeff());
    return (lambda_.transpose() * eta * lambda_ - eta).cwiseAbs().maxCoeff() / scale;
}

PoincareElement PoincareElement::identity(Eigen::Index d) { return {RMatrix::Identity(d, d), RVector::Zero(d)}; }

PoincareElement PoincareElement::translation(const RVector &a) { return {RMatrix::Identity(a.size(), a.size()), a}; }

PoincareElement PoincareElement::boost(Eigen::Index d, double t) {
    RMatrix l = RMatrix::Identity(d, d);
    double  c = std::cosh(two_pi * t), s = std::sinh(two_pi * t);
    l(0, 0) = c;
    l(0, 1) = -s;
    l(1, 0) = -s;
    l(1, 1) = c;
    return {l, RVector::Zero(d)};
}

PoincareElement PoincareElement::reflection(Eigen::Index d) {
    RMatrix l = RMatrix::Identity(d, d);
    l(0, 0)   = -1.0;
    l(1, 1)   = -1.0;
    return {l, RVector::Zero(d)};
}

PoincareElement PoincareElement::operator*(const PoincareElement &o) const {
    if(o.d() != d()) throw DimensionError("Poincare composition: dimension mismatch");
    return {lambda_ * o.lambda_, a_ + lambda_ * o.a_};
}

PoincareElement PoincareElement::inverse() const {
    RMatrix eta = minkowski_metric(d());
    RMatrix li  = eta * lambda_.transpose() * eta;
    return {li, -li * a_};
}

double PoincareElement::distance(const PoincareElement &o) const {
    return std::max((lambda_ - o.lambda_).cwiseAbs().maxCoeff(), (a_ - o.a_).cwiseAbs().maxCoeff());
}

RVector Wedge::normal(int which) const {
    const Eigen::Index d = this->d();
    RVector            n = which == 0 ? RVector(g_.lambda() * lightcone_vec(d, 1, -1)) : RVector(-(g_.lambda() * lightcone_vec(d, 1, 1)));
    return scaled_to_unit_time(n);
}

RVector Wedge::ray(int which) const {
    const Eigen::Index d = this->d();
    return scaled_to_unit_time(g_.lambda() * lightcone_vec(d, which == 0 ? 1.0 : -1.0, 1.0));
}

RMatrix Wedge::edge() const { return g_.lambda().rightCols(d() - 2); }

bool Wedge::contains(const RVector &x, double tol) const {
    RVector y = x - apex();
    return minkowski(y, normal(0)) > tol && minkowski(y, normal(1)) > tol;
}

PoincareElement Wedge::boost(double t) const {
    double s = g_.orthochronous() ? t : -t;
    return g_ * PoincareElement::boost(d(), s) * g_.inverse();
}

PoincareElement Wedge::reflection() const { return g_ * PoincareElement::reflection(d()) * g_.inverse(); }

Wedge Wedge::translated(const RVector &a) const { return Wedge(PoincareElement::translation(a) * g_); }

Wedge transform_wedge(const PoincareElement &g, const Wedge &w) { return Wedge(g * w.g()); }

Wedge causal_complement(const Wedge &w) { return Wedge(w.g() * PoincareElement::reflection(w.d())); }

bool wedge_equal(const Wedge &w1, const Wedge &w2, double tol) {
    if(w1.d() != w2.d()) return false;
    double  scale = std::max({1.0, w1.apex().norm(), w2.apex().norm()});
    RVector da    = w1.apex() - w2.apex();
    for(int i = 0; i < 2; ++i) {
        RVector n1 = w1.normal(i), n2 = w2.normal(i);
        if((n1 - n2).cwiseAbs().maxCoeff() > tol) return false;
        if(std::abs(minkowski(da, n1)) > tol * scale) return false;
    }
    return true;
}

InclusionResult wedge_inclusion(const Wedge &inner, const Wedge &outer, double tol) {
    if(inner.d() != outer.d()) throw DimensionError("wedge inclusion: dimension mismatch");
    InclusionResult res;
    if(inner.d() == 2) {
        double scale = 1e-12 * std::max({1.0, std::abs(inner.apex_u()), std::abs(inner.apex_v()), std::abs(outer.apex_u()),
                                         std::abs(outer.apex_v())});
        if(inner.right() != outer.right())
            res.included = false;
        else if(outer.right())
            res.included = inner.apex_u() >= outer.apex_u() - scale && inner.apex_v() <= outer.apex_v() + scale;
        else
            res.included = inner.apex_u() <= outer.apex_u() + scale && inner.apex_v() >= outer.apex_v() - scale;
    } else {
        res.exact      = false;
        res.included   = true;
        RVector c      = inner.apex() - outer.apex();
        double  cscale = std::max(1.0, c.norm());
        RMatrix e      = inner.edge();
        for(int i = 0; i < 2 && res.included; ++i) {
            RVector n = outer.normal(i);
            if(minkowski(c, n) < -tol * cscale) res.included = false;
            for(int r = 0; r < 2; ++r)
                if(minkowski(inner.ray(r), n) < -tol) res.included = false;
            for(Eigen::Index k = 0; k < e.cols(); ++k)
                if(std::abs(minkowski(RVector(e.col(k)), n)) > tol * std::max(1.0, e.col(k).norm())) res.included = false;
        }
    }
    if(!res.included) res.witness = search_witness(inner, outer);
    return res;
}

PositiveInclusionCert positive_inclusion_chain(const Wedge &inner, const Wedge &outer, double tol) {
    auto inc = wedge_inclusion(inner, outer, tol);
    if(!inc.included) throw InclusionError("positive_inclusion_chain: inner wedge is not contained in the outer wedge", inc.witness);
    for(int i = 0; i < 2; ++i)
        if((inner.normal(i) - outer.normal(i)).cwiseAbs().maxCoeff() > tol)
            throw UnsupportedError("positive_inclusion_chain: wedges with different linear parts are only certified in d = 2");
    const Eigen::Index d = outer.d();
    RMatrix            m(d, d);
    m.col(0)            = outer.ray(0);
    m.col(1)            = outer.ray(1);
    m.rightCols(d - 2)  = outer.edge();
    RVector c           = inner.apex() - outer.apex();
    RVector coef        = m.fullPivLu().solve(c);
    double  scale       = std::max(1.0, c.norm());
    PositiveInclusionCert cert;
    cert.outer = outer;
    cert.inner = inner;
    const double t_sample = 0.37;
    auto         b        = outer.boost(t_sample);
    auto         r        = outer.reflection();
    for(int i = 0; i < 2; ++i) {
        double a0 = std::max(coef[i], 0.0);
        if(a0 <= tol * scale) continue;
        InclusionStep st;
        st.h         = m.col(i);
        st.a0        = a0;
        st.direction = st.h[0] > 0 ? +1 : -1;
        RVector bh   = b.lambda() * st.h;
        double  hn   = st.h.norm();
        st.boost_residual = std::min((bh - std::exp(-two_pi * t_sample) * st.h).norm(), (bh - std::exp(two_pi * t_sample) * st.h).norm()) / hn;
        st.reflection_residual = (r.lambda() * st.h + st.h).norm() / hn;
        cert.steps.push_back(st);
    }
    return cert;
}

Wedge apply_certificate(const PositiveInclusionCert &cert) {
    RVector shift = RVector::Zero(cert.outer.d());
    for(const auto &st : cert.steps) shift += st.a0 * st.h;
    return cert.outer.translated(shift);
}

std::string to_string(RegionKind k) {
    switch(k) {
        case RegionKind::wedge: return "wedge";
        case RegionKind::double_cone: return "double_cone";
        case RegionKind::spacelike_cone: return "spacelike_cone";
        case RegionKind::lightlike_strip: return "lightlike_strip";
        case RegionKind::general_intersection: return "general_intersection";
    }
    return "unknown";
}

Region Region::wedge(const Wedge &w) { return {RegionKind::wedge, {w}, std::nullopt}; }

Region Region::double_cone_2d(const RVector &a, const RVector &b) {
    if(a.size() != 2 || b.size() != 2) throw DimensionError("double_cone_2d: expected 2-vectors");
    Wedge right = Wedge::standard(2).translated(a);
    Wedge left  = Wedge::standard_complement(2).translated(b);
    return {RegionKind::double_cone, {right, left}, std::nullopt};
}

Region Region::lightlike_strip(const Wedge &w, const RVector &a) {
    if(a.size() != w.d()) throw DimensionError("lightlike_strip: translation dimension mismatch");
    if(std::abs(minkowski(a, a)) > 1e-12 * std::max(1.0, a.squaredNorm())) throw PreconditionError("lightlike_strip: translation is not lightlike");
    if(!wedge_inclusion(w.translated(a), w).included) throw PreconditionError("lightlike_strip: W + a is not contained in W");
    return {RegionKind::lightlike_strip, {w, causal_complement(w).translated(a)}, a};
}

Region Region::spacelike_cone(const RVector &apex, const Eigen::Matrix3d &gens) {
    if(apex.size() != 4) throw DimensionError("spacelike_cone: apex must be a 4-vector");
    if(std::abs(gens.determinant()) < 1e-12) throw PreconditionError("spacelike_cone: generators are linearly dependent");
    Region r;
    r.kind = RegionKind::spacelike_cone;
    for(int k = 0; k < 3; ++k) {
        Eigen::Vector3d n = gens.col((k + 1) % 3).cross(gens.col((k + 2) % 3));
        if(n.dot(gens.col(k)) < 0) n = -n;
        n.normalize();
        Eigen::Vector3d helper = std::abs(n[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
        Eigen::Vector3d e2     = (helper - helper.dot(n) * n).normalized();
        Eigen::Vector3d e3     = n.cross(e2);
        RMatrix         l      = RMatrix::Identity(4, 4);
        l.block(1, 1, 3, 1)    = n;
        l.block(1, 2, 3, 1)    = e2;
        l.block(1, 3, 3, 1)    = e3;
        r.wedges.emplace_back(PoincareElement(l, apex));
    }
    return r;
}

Region Region::general_intersection(std::vector<Wedge> ws) {
    if(ws.empty()) throw PreconditionError("general_intersection: empty wedge list");
    for(const auto &w : ws)
        if(w.d() != ws.front().d()) throw DimensionError("general_intersection: mixed dimensions");
    return {RegionKind::general_intersection, std::move(ws), std::nullopt};
}

bool Region::contains(const RVector &x) const {
    return std::all_of(wedges.begin(), wedges.end(), [&x](const Wedge &w) { return w.contains(x); });
}

std::string Region::canonical_key() const {
    std::vector<std::string> keys;
    for(const auto &w : covering_family(*this).wedges) keys.push_back(wedge_key(w));
    std::sort(keys.begin(), keys.end());
    std::string k = "d" + std::to_string(d()) + ":";
    for(const auto &s : keys) k += s;
    return k;
}

CoveringFamily covering_family(const Region &r) {
    CoveringFamily fam;
    if(r.wedges.empty()) throw UnsupportedError("covering_family: region has no defining wedges");
    if(r.kind == RegionKind::wedge) {
        fam.wedges = {r.wedges.front()};
        return fam;
    }
    if(r.d() == 2) {
        // keep the wedges attaining the binding lightlike bounds
        std::vector<std::size_t> pick;
        auto                     best = [&](bool right, bool use_u, bool want_max) {
            std::optional<std::size_t> idx;
            for(std::size_t i = 0; i < r.wedges.size(); ++i) {
                const auto &w = r.wedges[i];
                if(w.right() != right) continue;
                double x = use_u ? w.apex_u() : w.apex_v();
                if(!idx) idx = i;
                else {
                    double y = use_u ? r.wedges[*idx].apex_u() : r.wedges[*idx].apex_v();
                    if(want_max ? x > y : x < y) idx = i;
                }
            }
            if(idx && std::find(pick.begin(), pick.end(), *idx) == pick.end()) pick.push_back(*idx);
        };
        best(true, true, true);
        best(true, false, false);
        best(false, true, false);
        best(false, false, true);
        std::sort(pick.begin(), pick.end());
        for(auto i : pick) fam.wedges.push_back(r.wedges[i]);
        return fam;
    }
    for(const auto &w : r.wedges)
        if(std::none_of(fam.wedges.begin(), fam.wedges.end(), [&w](const Wedge &v) { return wedge_equal(v, w); })) fam.wedges.push_back(w);
    fam.exact = r.kind == RegionKind::spacelike_cone;
    return fam;
}

std::optional<Wedge> separating_wedge(const Region &r1, const Region &r2) {
    if(r1.d() != r2.d()) throw DimensionError("separating_wedge: dimension mismatch");
    if(r1.d() == 2) {
        Box b1 = lightcone_box(r1), b2 = lightcone_box(r2);
        if(std::isfinite(b1.u_lo) && std::isfinite(b1.v_hi) && b2.u_hi <= b1.u_lo && b2.v_lo >= b1.v_hi) return wedge_2d(true, b1.u_lo, b1.v_hi);
        if(std::isfinite(b1.u_hi) && std::isfinite(b1.v_lo) && b2.u_lo >= b1.u_hi && b2.v_hi <= b1.v_lo) return wedge_2d(false, b1.u_hi, b1.v_lo);
        return std::nullopt;
    }
    for(const auto &w : covering_family(r1).wedges) {
        Wedge wc = causal_complement(w);
        for(const auto &v : covering_family(r2).wedges)
            if(wedge_inclusion(v, wc).included) return w;
    }
    return std::nullopt;
}

nlohmann::json to_json(const PoincareElement &g) {
    nlohmann::json j;
    j["d"]      = g.d();
    auto lin    = nlohmann::json::array();
    for(Eigen::Index i = 0; i < g.d(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(g.d()));
        for(Eigen::Index k = 0; k < g.d(); ++k) row[static_cast<std::size_t>(k)] = g.lambda()(i, k);
        lin.push_back(row);
    }
    j["linear"]        = lin;
    j["translation"]   = std::vector<double>(g.a().data(), g.a().data() + g.d());
    j["orthochronous"] = g.orthochronous();
    return j;
}

nlohmann::json to_json(const Wedge &w) {
    nlohmann::json j = to_json(w.g());
    if(w.d() == 2) {
        j["orientation"] = w.right() ? "right" : "left";
        j["apex_u"]      = w.apex_u();
        j["apex_v"]      = w.apex_v();
    }
    return j;
}

nlohmann::json to_json(const PositiveInclusionCert &c) {
    nlohmann::json j;
    j["outer"] = to_json(c.outer);
    j["inner"] = to_json(c.inner);
    auto steps = nlohmann::json::array();
    for(const auto &s : c.steps)
        steps.push_back({{"h", std::vector<double>(s.h.data(), s.h.data() + s.h.size())},
                         {"a0", s.a0},
                         {"direction", s.direction},
                         {"boost_residual", s.boost_residual},
                         {"reflection_residual", s.reflection_residual}});
    j["steps"] = steps;
    return j;
}

nlohmann::json to_json(const Region &r) {
    nlohmann::json j;
    j["kind"] = to_string(r.kind);
    auto ws   = nlohmann::json::array();
    for(const auto &w : r.wedges) ws.push_back(to_json(w));
    j["wedges"] = ws;
    if(r.strip_a) j["strip_a"] = std::vector<double>(r.strip_a->data(), r.strip_a->data() + r.strip_a->size());
    return j;
}

} // namespace modloc
