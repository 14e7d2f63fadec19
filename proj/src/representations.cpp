#include "modloc/representations.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace modloc {

namespace {
    constexpr double pi     = std::numbers::pi;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const cplx       I(0.0, 1.0);

    double max_abs(const DenseOperator &a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

    DenseOperator expi_real_symmetric(const RMatrix &m) {
        Eigen::SelfAdjointEigenSolver<RMatrix> es(m);
        DenseOperator                          v = es.eigenvectors().cast<cplx>();
        CVector                                ph(m.rows());
        for(Eigen::Index i = 0; i < m.rows(); ++i) ph[i] = std::exp(I * es.eigenvalues()[i]);
        return v * ph.asDiagonal() * v.transpose();
    }

    void check_entry(ValidationReport &rep, const std::string &name, double res, double thr) {
        rep.entries.push_back({name, res, thr, res == 0.0});
        if(!(res <= thr)) {
            std::ostringstream os;
            os << "model construction failed: identity '" << name << "' has residual " << res << " above " << thr;
            throw ConstructionError(os.str());
        }
    }

    Eigen::Matrix3d random_rotation(Uniform01 &u) {
        Eigen::Quaterniond q(2 * u() - 1, 2 * u() - 1, 2 * u() - 1, 2 * u() - 1);
        q.normalize();
        return q.toRotationMatrix();
    }

    // Gauss-Hermite nodes by Golub-Welsch
    RVector hermite_nodes(int q) {
        RVector diag = RVector::Zero(q), sub(q - 1);
        for(int k = 1; k < q; ++k) sub[k - 1] = std::sqrt(0.5 * k);
        Eigen::SelfAdjointEigenSolver<RMatrix> es;
        es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }

    struct NodeValues {
        RVector rho;        // phi_n(x) sqrt(W), n < N
        double  log_sqrt_w; // W = 1 / sum_{k<Q} phi_k(x)^2
    };

    // Hermite function values with running rescaling, so nothing under- or overflows
    NodeValues hermite_at(double x, int n, int q) {
        std::vector<double> val(static_cast<std::size_t>(q)), lsc(static_cast<std::size_t>(q));
        const double        big = 1e150, log_big = std::log(big);
        double              p_prev = std::pow(pi, -0.25), p_cur = std::sqrt(2.0) * x * p_prev, shift = 0.0;
        val[0] = p_prev;
        lsc[0] = 0.0;
        if(q > 1) {
            val[1] = p_cur;
            lsc[1] = 0.0;
        }
        for(int k = 1; k + 1 < q; ++k) {
            double p_next = std::sqrt(2.0 / (k + 1)) * x * p_cur - std::sqrt(static_cast<double>(k) / (k + 1)) * p_prev;
            p_prev        = p_cur;
            p_cur         = p_next;
            if(std::abs(p_cur) > big) {
                p_cur /= big;
                p_prev /= big;
                shift += log_big;
            }
            val[static_cast<std::size_t>(k + 1)] = p_cur;
            lsc[static_cast<std::size_t>(k + 1)] = shift;
        }
        double mx = -INFINITY;
        for(int k = 0; k < q; ++k)
            if(val[k] != 0.0) mx = std::max(mx, std::log(std::abs(val[k])) + lsc[k]);
        double s = 0.0;
        for(int k = 0; k < q; ++k)
            if(val[k] != 0.0) s += std::exp(2.0 * (std::log(std::abs(val[k])) + lsc[k] - mx));
        double     lse = 2.0 * mx + std::log(s); // log sum (phi_k e^{x^2/2})^2
        NodeValues nv;
        nv.rho.resize(n);
        for(int k = 0; k < n; ++k)
            nv.rho[k] = val[k] == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(val[k])) + lsc[k] - 0.5 * lse), val[k]);
        nv.log_sqrt_w = 0.5 * x * x - 0.5 * lse;
        return nv;
    }

    DenseOperator sphere_generator(const SphereToyModel &s, const Eigen::Vector3d &n) { return n[0] * s.Lx() + n[1] * s.Ly() + n[2] * s.Lz(); }

    ModularData wedge_data_from(const ModelOperator &v, const AntilinearOperator &j0, const DenseOperator &l0, const Tolerances &tol) {
        AntilinearOperator j = v.conjugate(j0);
        DenseOperator      l = v.conjugate(l0);
        l                    = 0.5 * (l + l.adjoint()).eval();
        return ModularData(j, l, tol);
    }

    bool is_identity(const PoincareElement &g) {
        return g.lambda() == RMatrix::Identity(g.d(), g.d()) && g.a() == RVector::Zero(g.d());
    }
}

ModelSpec model_spec_from_json(const nlohmann::json &j) {
    ModelSpec s;
    s.variant = j.value("variant", s.variant);
    s.m       = j.value("m", s.m);
    s.N       = j.value("N", s.N);
    s.sigma   = j.value("sigma", s.sigma);
    s.j       = j.value("j", s.j);
    s.E       = j.value("E", s.E);
    return s;
}

nlohmann::json to_json(const ModelSpec &s) {
    nlohmann::json j;
    j["variant"] = s.variant;
    if(s.variant == "rapidity") {
        j["m"]     = s.m;
        j["N"]     = s.N;
        j["sigma"] = s.sigma;
    } else if(s.variant == "sphere") {
        j["j"] = s.j;
        j["E"] = s.E;
    }
    return j;
}

nlohmann::json to_json(const ValidationReport &r) {
    auto out = nlohmann::json::array();
    for(const auto &e : r.entries)
        out.push_back({{"identity", e.identity}, {"residual", e.residual}, {"threshold", e.threshold}, {"exact", e.exact}});
    return out;
}

RapidityModel::RapidityModel(double m, int n, double sigma) : m_(m), sigma_(sigma), n_(n) {
    if(!(m > 0.0)) throw ConstructionError("rapidity model: mass must be positive");
    if(n < 2) throw ConstructionError("rapidity model: basis size N must be at least 2");
    if(!(sigma > 0.0)) throw ConstructionError("rapidity model: Hermite scale must be positive");
    d_ = RMatrix::Zero(n, n);
    for(int k = 0; k + 1 < n; ++k) {
        double c      = std::sqrt(0.5 * (k + 1)) / sigma;
        d_(k, k + 1)  = c;
        d_(k + 1, k)  = -c;
    }
    h_ = DenseOperator::Zero(n, n);
    h_.imag() = -two_pi * d_;
    h_spec_   = eigh(h_);

    const int q = 4 * n;
    RVector   x = hermite_nodes(q);
    theta_      = sigma * x;
    rho_.resize(n, q);
    log_sqrt_w_.resize(q);
    for(int i = 0; i < q; ++i) {
        auto nv         = hermite_at(x[i], n, q);
        rho_.col(i)     = nv.rho;
        log_sqrt_w_[i]  = nv.log_sqrt_w;
    }
}

RMatrix RapidityModel::galerkin(const std::function<double(double)> &f) const {
    RVector fv(theta_.size());
    for(Eigen::Index i = 0; i < theta_.size(); ++i) fv[i] = f(theta_[i]);
    RMatrix g = rho_ * fv.asDiagonal() * rho_.transpose();
    return 0.5 * (g + g.transpose());
}

RMatrix RapidityModel::translation_generator(const RVector &a) const {
    if(a.size() != 2) throw DimensionError("rapidity model: translations are 2-vectors");
    const double a0 = a[0], a1 = a[1], m = m_;
    return galerkin([=](double th) { return m * (a0 * std::cosh(th) - a1 * std::sinh(th)); });
}

DenseOperator RapidityModel::translation(const RVector &a) const { return expi_real_symmetric(translation_generator(a)); }

DenseOperator RapidityModel::boost(double t) const {
    return h_spec_.map_complex([t](double h) { return std::exp(cplx(0.0, t * h)); });
}

CVector RapidityModel::project(const std::function<double(double)> &log_envelope, const std::function<cplx(double)> &phase) const {
    CVector samples(theta_.size());
    for(Eigen::Index i = 0; i < theta_.size(); ++i) {
        double lg  = log_sqrt_w_[i] + log_envelope(theta_[i]);
        samples[i] = lg < -745.0 ? cplx(0.0) : std::exp(lg) * phase(theta_[i]);
    }
    return std::sqrt(sigma_) * (rho_.cast<cplx>() * samples);
}

SphereToyModel::SphereToyModel(int j, double energy) : j_(j), e_(energy) {
    if(j < 0) throw ConstructionError("sphere model: spin must be a non-negative integer");
    if(energy == 0.0 || !std::isfinite(energy)) throw ConstructionError("sphere model: energy must be finite and non-zero");
    const Eigen::Index n = dim();
    lz_                  = DenseOperator::Zero(n, n);
    DenseOperator lp     = DenseOperator::Zero(n, n);
    for(Eigen::Index k = 0; k < n; ++k) {
        double mk = j - static_cast<double>(k);
        lz_(k, k) = mk;
        if(k > 0) lp(k - 1, k) = std::sqrt(j * (j + 1.0) - mk * (mk + 1.0));
    }
    DenseOperator lm = lp.transpose();
    lx_              = 0.5 * (lp + lm);
    ly_              = (-0.5 * I) * (lp - lm);
    DenseOperator mx = eigh(lx_).map_complex([](double l) { return std::exp(cplx(0.0, -pi * l)); });
    jt_              = AntilinearOperator(mx);
}

DenseOperator SphereToyModel::rotation(const Eigen::Matrix3d &r) const {
    Eigen::AngleAxisd aa(r);
    if(aa.angle() == 0.0) return DenseOperator::Identity(dim(), dim());
    DenseOperator g = aa.angle() * sphere_generator(*this, aa.axis());
    return eigh(g).map_complex([](double l) { return std::exp(cplx(0.0, -l)); });
}

Eigen::Matrix3d sphere_rho() { return Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal(); }

SphereGroupElement SphereGroupElement::operator*(const SphereGroupElement &o) const {
    Eigen::Matrix3d r2 = pt ? Eigen::Matrix3d(sphere_rho() * o.rotation * sphere_rho()) : o.rotation;
    return {rotation * r2, time + (pt ? -o.time : o.time), pt != o.pt};
}

SphereGroupElement SphereGroupElement::inverse() const {
    if(!pt) return {rotation.transpose(), -time, false};
    return {sphere_rho() * rotation.transpose() * sphere_rho(), time, true};
}

Eigen::Index model_dim(const Model &m) {
    if(auto r = std::get_if<RapidityModel>(&m)) return r->N();
    if(auto s = std::get_if<SphereToyModel>(&m)) return s->dim();
    return 1;
}

ModelOperator ModelOperator::operator*(const ModelOperator &o) const {
    return {antilinear ? DenseOperator(matrix * o.matrix.conjugate()) : DenseOperator(matrix * o.matrix), antilinear != o.antilinear};
}

ModelOperator ModelOperator::inverse() const {
    DenseOperator inv = matrix.partialPivLu().inverse();
    return {antilinear ? DenseOperator(inv.conjugate()) : inv, antilinear};
}

RealSubspace ModelOperator::image(const RealSubspace &k) const {
    return antilinear ? k.image(AntilinearOperator(matrix)) : k.image(matrix);
}

DenseOperator ModelOperator::conjugate(const DenseOperator &l) const {
    DenseOperator x = matrix * (antilinear ? DenseOperator(l.conjugate()) : l);
    return matrix.transpose().partialPivLu().solve(x.transpose()).transpose();
}

AntilinearOperator ModelOperator::conjugate(const AntilinearOperator &s) const {
    DenseOperator inv = matrix.partialPivLu().inverse();
    if(antilinear) return AntilinearOperator(matrix * s.matrix().conjugate() * inv.conjugate());
    return AntilinearOperator(matrix * s.matrix() * inv.conjugate());
}

double operator_distance(const ModelOperator &a, const ModelOperator &b) {
    if(a.antilinear != b.antilinear) return INFINITY;
    return max_abs(a.matrix - b.matrix);
}

ModelOperator group_operator(const Model &model, const GroupElement &g) {
    if(std::holds_alternative<TrivialModel>(model)) {
        bool anti = false;
        if(auto p = std::get_if<PoincareElement>(&g)) anti = !p->orthochronous();
        else anti = std::get<SphereGroupElement>(g).pt;
        return {DenseOperator::Identity(1, 1), anti};
    }
    if(auto r = std::get_if<RapidityModel>(&model)) {
        auto p = std::get_if<PoincareElement>(&g);
        if(!p) throw UnsupportedError("group_operator: rapidity model needs a Poincare element");
        if(p->d() != 2) throw UnsupportedError("group_operator: rapidity model is two-dimensional");
        bool    ortho = p->orthochronous();
        RMatrix l     = ortho ? p->lambda() : RMatrix(-p->lambda());
        double  t     = std::asinh(-l(0, 1)) / two_pi;
        DenseOperator ub = t == 0.0 ? DenseOperator::Identity(r->N(), r->N()) : r->boost(t);
        DenseOperator ua = p->a().isZero(0.0) ? DenseOperator::Identity(r->N(), r->N()) : r->translation(p->a());
        return {ua * (ortho ? ub : DenseOperator(ub.conjugate())), !ortho};
    }
    const auto &s  = std::get<SphereToyModel>(model);
    auto        sg = std::get_if<SphereGroupElement>(&g);
    if(!sg) throw UnsupportedError("group_operator: sphere model needs a sphere group element");
    DenseOperator u = std::exp(I * (s.E() * sg->time)) * s.rotation(sg->rotation);
    if(sg->pt) return {u * s.J().matrix(), true};
    return {u, false};
}

SphereGroupElement SphereWedge::representative() const {
    Eigen::Vector3d    n = pole.normalized();
    Eigen::Quaterniond q = Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(), n);
    return {q.toRotationMatrix(), time, false};
}

std::vector<SphereWedge> coordinate_hemispheres() {
    std::vector<SphereWedge> out;
    for(int axis = 0; axis < 3; ++axis)
        for(double s : {1.0, -1.0}) {
            Eigen::Vector3d n = Eigen::Vector3d::Zero();
            n[axis]           = s;
            out.push_back({n, 0.0});
        }
    return out;
}

ModularData wedge_modular_data(const Model &model, const Wedge &w, const Tolerances &tol) {
    if(std::holds_alternative<TrivialModel>(model)) return ModularData(AntilinearOperator::conjugation(1), DenseOperator::Zero(1, 1), tol);
    auto r = std::get_if<RapidityModel>(&model);
    if(!r) throw UnsupportedError("wedge_modular_data: Minkowski wedges are not representable in the sphere model");
    if(w.d() != 2) throw UnsupportedError("wedge_modular_data: rapidity model represents d = 2 wedges only");
    auto j0 = AntilinearOperator::conjugation(r->N());
    if(is_identity(w.g())) return ModularData(j0, r->boost_generator(), tol);
    return wedge_data_from(group_operator(model, w.g()), j0, r->boost_generator(), tol);
}

ModularData wedge_modular_data(const Model &model, const SphereWedge &w, const Tolerances &tol) {
    if(std::holds_alternative<TrivialModel>(model)) return ModularData(AntilinearOperator::conjugation(1), DenseOperator::Zero(1, 1), tol);
    auto s = std::get_if<SphereToyModel>(&model);
    if(!s) throw UnsupportedError("wedge_modular_data: hemisphere diamonds are only representable in the sphere model");
    // Delta = U(Lambda_W0(-i)); Lambda_W0(theta) rotates the (x, y) plane by -theta
    return wedge_data_from(group_operator(model, w.representative()), s->J(), s->Lz(), tol);
}

BuiltModel build_model(const ModelSpec &spec, const Tolerances &tol) {
    BuiltModel out;
    out.spec = spec;
    if(spec.variant == "rapidity") {
        RapidityModel     r(spec.m, spec.N, spec.sigma);
        ValidationReport &rep = out.report;
        check_entry(rep, "D + D^T = 0", (r.D() + r.D().transpose()).cwiseAbs().maxCoeff(), 0.0);
        check_entry(rep, "J H J + H = 0", max_abs(r.boost_generator().conjugate() + r.boost_generator()), 0.0);
        RVector a(2);
        a << 0.2, 0.1;
        RMatrix ma = r.translation_generator(a);
        check_entry(rep, "M_a - M_a^T = 0", (ma - ma.transpose()).cwiseAbs().maxCoeff(), 0.0);
        check_entry(rep, "J U(a) J - U(-a)", max_abs(DenseOperator(r.translation(a).conjugate()) - r.translation(-a)), tol.spec);
        const double m = r.m();
        double       pmin =
            std::min(Eigen::SelfAdjointEigenSolver<RMatrix>(r.galerkin([m](double th) { return m * std::exp(-th); })).eigenvalues()[0],
                     Eigen::SelfAdjointEigenSolver<RMatrix>(r.galerkin([m](double th) { return m * std::exp(th); })).eigenvalues()[0]);
        check_entry(rep, "lightlike generators >= 0", std::max(0.0, -pmin), tol.spec);
        const RVector &h    = r.boost_spectrum().eigenvalues;
        double         pair = 0.0;
        for(Eigen::Index i = 0; i < h.size(); ++i) pair = std::max(pair, std::abs(h[i] + h[h.size() - 1 - i]) / std::max(1.0, std::abs(h[i])));
        check_entry(rep, "boost spectrum symmetric", pair, tol.pairing);
        out.model = std::move(r);
    } else if(spec.variant == "sphere") {
        SphereToyModel    s(spec.j, spec.E);
        ValidationReport &rep = out.report;
        Eigen::Index      n   = s.dim();
        check_entry(rep, "J^2 = 1", max_abs(s.J().compose(s.J()) - DenseOperator::Identity(n, n)), 1e-12);
        Model     md = s;
        Uniform01 u(7);
        double    refl = 0.0, law = 0.0, inv = 0.0;
        for(int k = 0; k < 8; ++k) {
            SphereGroupElement g1{random_rotation(u), 2 * u() - 1, false};
            SphereGroupElement g2{random_rotation(u), 2 * u() - 1, u() < 0.5};
            SphereGroupElement rg{sphere_rho() * g1.rotation * sphere_rho(), -g1.time, false};
            auto               jo = ModelOperator{s.J().matrix(), true};
            refl = std::max(refl, operator_distance(jo * group_operator(md, g1) * jo, group_operator(md, rg)));
            law  = std::max(law, operator_distance(group_operator(md, g1) * group_operator(md, g2), group_operator(md, g1 * g2)));
            inv  = std::max(inv, operator_distance(group_operator(md, g2) * group_operator(md, g2.inverse()), ModelOperator{DenseOperator::Identity(n, n), false}));
        }
        check_entry(rep, "J U(r,t) J = U(rho r rho, -t)", refl, 1e-12);
        check_entry(rep, "U(g1) U(g2) = U(g1 g2)", law, 1e-12);
        check_entry(rep, "U(g) U(g^-1) = 1", inv, 1e-12);
        out.model = std::move(s);
    } else if(spec.variant == "trivial") {
        out.model = TrivialModel{};
    } else {
        throw ConstructionError("unknown model variant '" + spec.variant + "'");
    }
    return out;
}

CVector mass_shell_embedding(const RapidityModel &model, const std::vector<Bump> &f) {
    CVector      psi = CVector::Zero(model.N());
    const double m   = model.m();
    for(const auto &b : f) {
        if(!std::isfinite(b.amplitude) || !std::isfinite(b.c0) || !std::isfinite(b.c1) || !std::isfinite(b.width) || !(b.width > 0.0))
            throw PreconditionError("mass_shell_embedding: bump parameters must be finite with positive width");
        if(b.amplitude == 0.0) continue;
        const double w2  = b.width * b.width;
        const double lg0 = std::log(two_pi * w2 * std::abs(b.amplitude));
        const double sgn = b.amplitude > 0 ? 1.0 : -1.0;
        psi += model.project([=](double th) { return lg0 - 0.5 * w2 * m * m * std::cosh(2.0 * th); },
                             [=](double th) { return sgn * std::exp(I * (m * (b.c0 * std::cosh(th) - b.c1 * std::sinh(th)))); });
    }
    return psi;
}

nlohmann::json to_json(const BumpFamilySpec &s) {
    return {{"count", s.count}, {"width_min", s.width_min}, {"width_max", s.width_max}, {"depth_max", s.depth_max}, {"seed", s.seed}};
}

BumpFamilySpec bump_family_from_json(const nlohmann::json &j, BumpFamilySpec d) {
    d.count     = j.value("count", d.count);
    d.width_min = j.value("width_min", d.width_min);
    d.width_max = j.value("width_max", d.width_max);
    d.depth_max = j.value("depth_max", d.depth_max);
    d.seed      = j.value("seed", d.seed);
    return d;
}

std::vector<Bump> sample_bumps_in_wedge(const Wedge &w, const BumpFamilySpec &spec) {
    if(w.d() != 2) throw UnsupportedError("sample_bumps_in_wedge: d = 2 wedges only");
    if(!(spec.width_min > 0.0) || spec.width_max < spec.width_min) throw PreconditionError("bump family: invalid width range");
    Uniform01         u(spec.seed);
    std::vector<Bump> out;
    const double      s2 = std::sqrt(2.0);
    for(int i = 0; i < spec.count; ++i) {
        double wd = spec.width_min * std::exp(u() * std::log(spec.width_max / spec.width_min));
        double du = s2 * 6.0 * wd + spec.depth_max * u();
        double dv = s2 * 6.0 * wd + spec.depth_max * u();
        double uu = w.right() ? w.apex_u() + du : w.apex_u() - du;
        double vv = w.right() ? w.apex_v() - dv : w.apex_v() + dv;
        out.push_back({1.0, 0.5 * (uu + vv), 0.5 * (uu - vv), wd});
    }
    return out;
}

double bump_margin(const Wedge &w, const Bump &b) {
    double u = b.c0 + b.c1, v = b.c0 - b.c1;
    double du = w.right() ? u - w.apex_u() : w.apex_u() - u;
    double dv = w.right() ? w.apex_v() - v : v - w.apex_v();
    return std::min(du, dv) / std::sqrt(2.0) / b.width;
}

BwResidual bw_residual(const RealSubspace &k, const CVector &psi, const std::optional<AntilinearOperator> &tomita) {
    BwResidual r;
    r.distance = k.distance(psi);
    if(tomita) {
        double nv = psi.norm();
        r.tomita  = nv == 0.0 ? 0.0 : (tomita->apply(psi) - psi).norm() / nv;
    }
    return r;
}

std::string to_string(IsotonyMode m) { return m == IsotonyMode::plain ? "plain" : "twisted"; }

DenseOperator twist_half(const ModularData &m, double scale) {
    if(!(scale > 0.0)) throw PreconditionError("twist_half: scale must be positive");
    return m.spectrum().map_complex([scale](double h) { return std::exp(I * std::atan(1.0 / std::cosh(h / scale))); });
}

IsotonyReport isotony_probe(const RapidityModel &model, const Wedge &w, const RVector &a, IsotonyMode mode, const BumpFamilySpec &family,
                            double twist_scale, const Tolerances &tol) {
    IsotonyReport rep;
    Model         md   = model;
    ModularData   data = wedge_modular_data(md, w, tol);
    RealSubspace  k0   = subspace_from_modular(data, tol);
    RealSubspace  k    = k0;
    const auto    n    = model.N();
    DenseOperator t    = DenseOperator::Identity(n, n);
    AntilinearOperator j = data.J();
    if(mode == IsotonyMode::twisted) {
        t = twist_half(data, twist_scale);
        k = k.image(t);
        j = j.before(DenseOperator(t * t));
        rep.twist_involution_residual = max_abs(j.compose(j) - DenseOperator::Identity(n, n));
        DenseOperator v_lit = data.spectrum().map_complex([](double h) { return std::exp(I * (2.0 * std::atan2(1.0, std::exp(h)))); });
        AntilinearOperator j_lit = data.J().before(v_lit);
        rep.twist_literal_involution_residual = max_abs(j_lit.compose(j_lit) - DenseOperator::Identity(n, n));
    }
    DenseOperator gens(n, family.count);
    auto          bumps = sample_bumps_in_wedge(w, family);
    for(int i = 0; i < family.count; ++i) gens.col(i) = t * k0.project(mass_shell_embedding(model, {bumps[i]}));
    RealSubspace  fam = RealSubspace::from_generators(gens, tol.rank);
    rep.family_real_dim = static_cast<int>(fam.real_dim());
    DenseOperator ua  = model.translation(a);
    // per generator: an orthonormal basis of the span mixes in near-null directions fixed by round-off
    for(int i = 0; i < family.count; ++i) rep.residual = std::max(rep.residual, k.distance(ua * gens.col(i)));
    rep.subspace_sine       = subspace_distance(k.image(ua), k);
    DenseOperator jua       = j.conjugate_linear(ua);
    rep.reflection_residual = max_abs(jua - model.translation(-a));
    const double ts         = 0.05;
    DenseOperator dit       = data.delta_it(ts);
    RVector       la        = w.boost(ts).lambda() * a;
    rep.dilation_residual   = max_abs(dit * ua * dit.adjoint() - model.translation(la));
    const double m          = model.m();
    rep.positivity_min_eig =
        std::min(Eigen::SelfAdjointEigenSolver<RMatrix>(model.galerkin([m](double th) { return m * std::exp(-th); })).eigenvalues()[0],
                 Eigen::SelfAdjointEigenSolver<RMatrix>(model.galerkin([m](double th) { return m * std::exp(th); })).eigenvalues()[0]);
    double cell              = model.sigma() * pi / std::sqrt(2.0 * n);
    rep.resolution_parameter = a.norm() * m * std::exp(model.theta_max()) * cell;
    rep.resolution_warning   = rep.resolution_parameter > pi;
    return rep;
}

nlohmann::json to_json(const IsotonyReport &r) {
    nlohmann::json j{{"residual", r.residual},
                     {"family_real_dim", r.family_real_dim},
                     {"subspace_sine", r.subspace_sine},
                     {"reflection_residual", r.reflection_residual},
                     {"dilation_residual", r.dilation_residual},
                     {"positivity_min_eig", r.positivity_min_eig},
                     {"resolution_parameter", r.resolution_parameter},
                     {"resolution_warning", r.resolution_warning}};
    if(std::isfinite(r.twist_involution_residual)) j["twist_involution_residual"] = r.twist_involution_residual;
    if(std::isfinite(r.twist_literal_involution_residual)) j["twist_literal_involution_residual"] = r.twist_literal_involution_residual;
    return j;
}

StripReport strip_standardness_probe(const RapidityModel &model, const RVector &a, const Tolerances &tol) {
    if(a.size() != 2) throw DimensionError("strip probe: translation must be a 2-vector");
    if(std::abs(a[0] * a[0] - a[1] * a[1]) > 1e-12 * std::max(1.0, a.squaredNorm())) throw PreconditionError("strip probe: translation is not lightlike");
    StripReport rep;
    Model       md = model;
    Wedge       w1 = Wedge::standard(2);
    rep.degenerate  = a.isZero(0.0);
    rep.strip_empty = !rep.degenerate && !wedge_inclusion(w1.translated(a), w1).included;
    ModularData  d1 = wedge_modular_data(md, w1, tol);
    RealSubspace k1 = subspace_from_modular(d1, tol);
    RealSubspace k2 = subspace_from_modular(wedge_modular_data(md, causal_complement(w1).translated(a), tol), tol);
    RealSubspace mt = meet(k1, k2);
    rep.meet_real_dim = mt.real_dim();
    rep.verdict       = standardness(mt);
    RVector s         = principal_sines(k1, k2);
    rep.min_principal_sine = s.size() ? s[0] : 1.0;
    for(Eigen::Index i = 0; i < s.size(); ++i)
        if(s[i] < 1e-3) ++rep.sines_below_1e3;
    double hmax = d1.spectrum().eigenvalues.cwiseAbs().maxCoeff();
    if(0.5 * hmax > 40.0) {
        std::ostringstream os;
        os << "not evaluated: |Delta^{1/2}| = e^" << 0.5 * hmax << " exceeds the double-precision range where a fixed-space rank is meaningful";
        rep.fixed_space_note = os.str();
    } else {
        DenseOperator dh = d1.delta_power(0.5);
        DenseOperator ua = model.translation(a);
        DenseOperator t  = ua * dh * ua * dh - DenseOperator::Identity(model.N(), model.N());
        Eigen::JacobiSVD<DenseOperator> svd(t);
        const RVector &sv = svd.singularValues();
        double         scale = std::max(1.0, std::pow(dh.cwiseAbs().maxCoeff(), 2));
        int            null  = 0;
        for(Eigen::Index i = 0; i < sv.size(); ++i)
            if(sv[i] <= tol.rank * scale) ++null;
        rep.fixed_space_real_dim = 2 * null;
        rep.fixed_space_note     = "nullity of T - 1 at relative tolerance eps_rank";
    }
    return rep;
}

nlohmann::json to_json(const StripReport &r) {
    nlohmann::json j{{"degenerate", r.degenerate},
                     {"strip_empty", r.strip_empty},
                     {"meet_real_dim", r.meet_real_dim},
                     {"verdict", to_string(r.verdict.verdict)},
                     {"separating_defect", r.verdict.separating_defect},
                     {"cyclic_defect", r.verdict.cyclic_defect},
                     {"min_principal_sine", r.min_principal_sine},
                     {"sines_below_1e-3", r.sines_below_1e3},
                     {"fixed_space_note", r.fixed_space_note}};
    j["fixed_space_real_dim"] = r.fixed_space_real_dim ? nlohmann::json(*r.fixed_space_real_dim) : nlohmann::json(nullptr);
    return j;
}

ModelOperator DoubledRepresentation::operator()(const GroupElement &g) const {
    DenseOperator u1 = u_(g);
    DenseOperator u2 = c_.conjugate_linear(u_(reflect_(g)));
    Eigen::Index  n  = c_.dim();
    DenseOperator m  = DenseOperator::Zero(2 * n, 2 * n);
    m.topLeftCorner(n, n)     = u1;
    m.bottomRightCorner(n, n) = u2;
    return {m, false};
}

ModelOperator DoubledRepresentation::reflection() const {
    Eigen::Index  n = c_.dim();
    DenseOperator m = DenseOperator::Zero(2 * n, 2 * n);
    m.topRightCorner(n, n)   = c_.matrix();
    m.bottomLeftCorner(n, n) = c_.matrix();
    return {m, true};
}

DoubledRepresentation pct_double(std::function<DenseOperator(const GroupElement &)> u, const AntilinearOperator &c,
                                 std::function<GroupElement(const GroupElement &)> reflect, const Tolerances &tol) {
    double res = max_abs(c.compose(c) - DenseOperator::Identity(c.dim(), c.dim()));
    if(res > tol.spec) throw PreconditionError("pct_double: C is not an involution", res);
    return DoubledRepresentation(std::move(u), c, std::move(reflect));
}

} // namespace modloc
