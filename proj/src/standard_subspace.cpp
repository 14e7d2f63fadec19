#include "modloc/standard_subspace.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <sstream>

namespace modloc {

namespace {
    constexpr double tiny = 1e-300;

    double max_abs(const DenseOperator &a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

    struct LeftSvd {
        RMatrix u;
        RVector s;
        RMatrix v;
    };

    LeftSvd svd_thin(const RMatrix &m, bool want_v) {
        int opts = Eigen::ComputeThinU | (want_v ? Eigen::ComputeThinV : 0);
        if(std::min(m.rows(), m.cols()) <= 48) {
            Eigen::JacobiSVD<RMatrix> svd(m, opts);
            return {svd.matrixU(), svd.singularValues(), want_v ? RMatrix(svd.matrixV()) : RMatrix()};
        }
        Eigen::BDCSVD<RMatrix> svd(m, opts);
        return {svd.matrixU(), svd.singularValues(), want_v ? RMatrix(svd.matrixV()) : RMatrix()};
    }

    double spectral_norm(const RMatrix &m) {
        if(m.size() == 0) return 0.0;
        return svd_thin(m, false).s[0];
    }

    void require_same_ambient(const RealSubspace &a, const RealSubspace &b) {
        if(a.ambient_dim() != b.ambient_dim()) {
            std::ostringstream os;
            os << "ambient dimension mismatch: " << a.ambient_dim() << " vs " << b.ambient_dim();
            throw DimensionError(os.str());
        }
    }
}

RMatrix realify(const DenseOperator &x) {
    RMatrix out(2 * x.rows(), x.cols());
    out.topRows(x.rows())    = x.real();
    out.bottomRows(x.rows()) = x.imag();
    return out;
}

RVector realify(const CVector &x) {
    RVector out(2 * x.size());
    out.head(x.size()) = x.real();
    out.tail(x.size()) = x.imag();
    return out;
}

DenseOperator complexify(const RMatrix &x) {
    Eigen::Index  n = x.rows() / 2;
    DenseOperator out(n, x.cols());
    out.real() = x.topRows(n);
    out.imag() = x.bottomRows(n);
    return out;
}

CVector complexify(const RVector &x) {
    Eigen::Index n = x.size() / 2;
    CVector      out(n);
    out.real() = x.head(n);
    out.imag() = x.tail(n);
    return out;
}

RealSubspace RealSubspace::from_orthonormal(RMatrix basis, double eps_rank) {
    RealSubspace k;
    k.n_        = basis.rows() / 2;
    k.basis_    = std::move(basis);
    k.eps_rank_ = eps_rank;
    return k;
}

RealSubspace RealSubspace::from_real(const RMatrix &gens, double eps_rank) {
    Eigen::Index n = gens.rows() / 2;
    if(gens.rows() % 2 != 0) throw DimensionError("realified generators must have an even number of rows");
    std::vector<Eigen::Index> keep;
    RVector                   norms(gens.cols());
    double                    top = 0.0;
    for(Eigen::Index c = 0; c < gens.cols(); ++c) {
        norms[c] = gens.col(c).norm();
        if(std::isfinite(norms[c])) top = std::max(top, norms[c]);
    }
    // columns at round-off level relative to the largest would turn into spurious directions once normalized
    const double floor = std::max(tiny, 64.0 * std::numeric_limits<double>::epsilon() * top);
    for(Eigen::Index c = 0; c < gens.cols(); ++c)
        if(std::isfinite(norms[c]) && norms[c] > floor) keep.push_back(c);
    if(keep.empty()) return zero(n, eps_rank);
    RMatrix g(gens.rows(), static_cast<Eigen::Index>(keep.size()));
    for(std::size_t i = 0; i < keep.size(); ++i) g.col(static_cast<Eigen::Index>(i)) = gens.col(keep[i]) / norms[keep[i]];
    auto         svd  = svd_thin(g, false);
    Eigen::Index rank = 0;
    for(Eigen::Index i = 0; i < svd.s.size(); ++i)
        if(svd.s[i] > eps_rank * svd.s[0]) ++rank;
    return from_orthonormal(svd.u.leftCols(rank), eps_rank);
}

RealSubspace RealSubspace::from_generators(const DenseOperator &gens, double eps_rank) { return from_real(realify(gens), eps_rank); }

RealSubspace RealSubspace::zero(Eigen::Index n, double eps_rank) { return from_orthonormal(RMatrix(2 * n, 0), eps_rank); }

RealSubspace RealSubspace::full(Eigen::Index n, double eps_rank) { return from_orthonormal(RMatrix::Identity(2 * n, 2 * n), eps_rank); }

RealSubspace RealSubspace::real_part(Eigen::Index n, double eps_rank) {
    RMatrix b = RMatrix::Zero(2 * n, n);
    b.topRows(n).setIdentity();
    return from_orthonormal(b, eps_rank);
}

CVector RealSubspace::project(const CVector &x) const {
    RVector xr = realify(x);
    return complexify(RVector(basis_ * (basis_.transpose() * xr)));
}

double RealSubspace::distance(const CVector &x) const {
    double nx = x.norm();
    if(nx == 0.0) return 0.0;
    return (x - project(x)).norm() / nx;
}

RealSubspace RealSubspace::image(const DenseOperator &l) const { return from_generators(l * complex_basis(), eps_rank_); }

RealSubspace RealSubspace::image(const AntilinearOperator &s) const { return from_generators(s.apply(complex_basis()), eps_rank_); }

RealSubspace RealSubspace::times_i() const {
    RMatrix b(basis_.rows(), basis_.cols());
    b.topRows(n_)    = -basis_.bottomRows(n_);
    b.bottomRows(n_) = basis_.topRows(n_);
    return from_orthonormal(b, eps_rank_);
}

RealSubspace RealSubspace::orthogonal_complement() const {
    Eigen::Index m = 2 * n_, r = real_dim();
    if(r == 0) return full(n_, eps_rank_);
    Eigen::HouseholderQR<RMatrix> qr(basis_);
    RMatrix                       q = qr.householderQ() * RMatrix::Identity(m, m);
    return from_orthonormal(q.rightCols(m - r), eps_rank_);
}

RealSubspace RealSubspace::with_eps(double eps) const { return from_orthonormal(basis_, eps); }

RealSubspace symplectic_complement(const RealSubspace &k) { return k.times_i().orthogonal_complement(); }

RealSubspace meet(const RealSubspace &k1, const RealSubspace &k2) {
    require_same_ambient(k1, k2);
    Eigen::Index n = k1.ambient_dim();
    if(k1.real_dim() == 0 || k2.real_dim() == 0) return RealSubspace::zero(n, k1.eps_rank());
    const RMatrix &q1 = k1.basis();
    const RMatrix &q2 = k2.basis();
    RMatrix        r  = q1 - q2 * (q2.transpose() * q1);
    // full V needed: right singular vectors of the small sines
    Eigen::JacobiSVD<RMatrix> svd(r, Eigen::ComputeFullV);
    const RVector            &s = svd.singularValues();
    RMatrix                   v = svd.matrixV();
    std::vector<Eigen::Index> sel;
    for(Eigen::Index i = 0; i < v.cols(); ++i) {
        double si = i < s.size() ? s[i] : 0.0;
        if(si <= k1.eps_rank()) sel.push_back(i);
    }
    if(sel.empty()) return RealSubspace::zero(n, k1.eps_rank());
    RMatrix g(q1.rows(), static_cast<Eigen::Index>(sel.size()));
    for(std::size_t i = 0; i < sel.size(); ++i) g.col(static_cast<Eigen::Index>(i)) = q1 * v.col(sel[i]);
    return RealSubspace::from_real(g, k1.eps_rank());
}

// K1 plus the directions of K2 at principal sine above eps_rank, so that the rank decision matches meet
// (a rank cut on [Q1 Q2] would drop angles up to about 2 eps_rank)
RealSubspace join(const RealSubspace &k1, const RealSubspace &k2) {
    require_same_ambient(k1, k2);
    if(k2.real_dim() == 0) return k1;
    if(k1.real_dim() == 0) return k2.with_eps(k1.eps_rank());
    const RMatrix &q1 = k1.basis();
    const RMatrix &q2 = k2.basis();
    RMatrix        r  = q2 - q1 * (q1.transpose() * q2);
    auto           svd = svd_thin(r, false);
    Eigen::Index   add = 0;
    for(Eigen::Index i = 0; i < svd.s.size(); ++i)
        if(svd.s[i] > k1.eps_rank()) ++add;
    RMatrix g(q1.rows(), q1.cols() + add);
    g << q1, svd.u.leftCols(add);
    // re-orthonormalize: the kept singular vectors are orthogonal to Q1 only up to round-off
    Eigen::HouseholderQR<RMatrix> qr(g);
    RMatrix                       q = qr.householderQ() * RMatrix::Identity(g.rows(), g.cols());
    return RealSubspace::from_orthonormal(q, k1.eps_rank());
}

RealSubspace lattice_op(LatticeOp op, const RealSubspace &k1, const RealSubspace &k2) {
    return op == LatticeOp::meet ? meet(k1, k2) : join(k1, k2);
}

RVector principal_sines(const RealSubspace &k1, const RealSubspace &k2) {
    require_same_ambient(k1, k2);
    if(k1.real_dim() == 0) return RVector(0);
    RMatrix r = k1.basis() - k2.basis() * (k2.basis().transpose() * k1.basis());
    RVector s = Eigen::JacobiSVD<RMatrix>(r).singularValues();
    return s.reverse();
}

double subspace_distance(const RealSubspace &k1, const RealSubspace &k2) {
    require_same_ambient(k1, k2);
    if(k1.real_dim() == 0 && k2.real_dim() == 0) return 0.0;
    if(k1.real_dim() == 0 || k2.real_dim() == 0) return 1.0;
    RMatrix r1 = k1.basis() - k2.basis() * (k2.basis().transpose() * k1.basis());
    RMatrix r2 = k2.basis() - k1.basis() * (k1.basis().transpose() * k2.basis());
    return std::max(spectral_norm(r1), spectral_norm(r2));
}

bool subspace_equal(const RealSubspace &k1, const RealSubspace &k2) {
    if(k1.real_dim() != k2.real_dim()) return false;
    return join(k1, k2).real_dim() == k1.real_dim();
}

bool subspace_included(const RealSubspace &inner, const RealSubspace &outer) { return join(outer, inner).real_dim() == outer.real_dim(); }

std::string to_string(Standardness s) {
    switch(s) {
        case Standardness::standard: return "standard";
        case Standardness::fails_separating: return "fails_separating";
        case Standardness::fails_cyclic: return "fails_cyclic";
        case Standardness::both: return "both";
    }
    return "unknown";
}

StandardnessReport standardness(const RealSubspace &k) {
    StandardnessReport rep;
    RealSubspace       ik   = k.times_i();
    RealSubspace       sep  = meet(k, ik);
    RealSubspace       span = join(k, ik);
    rep.separating_defect   = sep.real_dim();
    rep.cyclic_defect       = 2 * k.ambient_dim() - span.real_dim();
    if(rep.separating_defect > 0) rep.separating_witness = complexify(RVector(sep.basis().col(0)));
    if(rep.cyclic_defect > 0) rep.cyclic_witness = complexify(RVector(span.orthogonal_complement().basis().col(0)));
    bool s = rep.separating_defect > 0, c = rep.cyclic_defect > 0;
    rep.verdict = s && c ? Standardness::both : s ? Standardness::fails_separating : c ? Standardness::fails_cyclic : Standardness::standard;
    return rep;
}

FactorReport factor_classify(const RealSubspace &k) {
    auto center = meet(k, symplectic_complement(k));
    return {center.real_dim() == 0, center.real_dim()};
}

ModularData::ModularData(AntilinearOperator j, DenseOperator log_delta, const Tolerances &tol)
    : j_(std::move(j)), log_delta_(std::move(log_delta)), spectrum_(eigh(log_delta_, tol)) {
    if(j_.dim() != log_delta_.rows()) throw DimensionError("modular data: J and log Delta differ in dimension");
}

DenseOperator ModularData::delta_power(double s) const {
    return spectrum_.map([s](double h) { return std::exp(s * h); });
}

DenseOperator ModularData::delta_it(double t) const {
    return spectrum_.map_complex([t](double h) { return std::exp(cplx(0.0, t * h)); });
}

AntilinearOperator ModularData::tomita() const { return j_.after(delta_power(0.5)); }

double ModularData::involution_residual() const {
    return max_abs(j_.compose(j_) - DenseOperator::Identity(dim(), dim()));
}

double ModularData::reflection_residual() const {
    return max_abs(j_.conjugate_linear(log_delta_) + log_delta_) / std::max(1.0, max_abs(log_delta_));
}

double tomita_square_residual(const ModularData &m) {
    auto   s     = m.tomita();
    double scale = std::max(1.0, std::pow(max_abs(s.matrix()), 2));
    return max_abs(s.compose(s) - DenseOperator::Identity(m.dim(), m.dim())) / scale;
}

double delta_inversion_residual(const ModularData &m) {
    DenseOperator jdj  = m.J().conjugate_linear(m.delta());
    DenseOperator dinv = m.delta_power(-1.0);
    return max_abs(jdj - dinv) / std::max(max_abs(dinv), tiny);
}

ModularData modular_from_subspace(const RealSubspace &k, const Tolerances &tol) {
    auto rep = standardness(k);
    if(rep.verdict != Standardness::standard) {
        std::ostringstream os;
        os << "modular_from_subspace: subspace is not standard (" << to_string(rep.verdict) << ", separating defect "
           << rep.separating_defect << ", cyclic defect " << rep.cyclic_defect << ")";
        throw PreconditionError(os.str());
    }
    DenseOperator      b = k.complex_basis();
    DenseOperator      binv = b.partialPivLu().inverse();
    AntilinearOperator s(b * binv.conjugate());
    auto               polar = antilinear_polar(s, tol);
    return ModularData(polar.J, polar.log_delta, tol);
}

RealSubspace subspace_from_modular(const ModularData &m, const Tolerances &tol) {
    const Eigen::Index n   = m.dim();
    double             inv = m.involution_residual();
    double             ref = m.reflection_residual();
    if(inv > tol.spec || ref > tol.spec) {
        std::ostringstream os;
        os << "subspace_from_modular: invariant violation, J^2 residual " << inv << ", J logD J residual " << ref;
        throw PreconditionError(os.str(), std::max(inv, ref));
    }
    const RVector       &h = m.spectrum().eigenvalues;
    const DenseOperator &u = m.spectrum().eigenvectors;
    for(Eigen::Index i = 0; i < n; ++i) {
        double gap = std::abs(h[i] + h[n - 1 - i]);
        if(gap > tol.pairing * std::max(1.0, std::abs(h[i]))) {
            std::ostringstream os;
            os << "subspace_from_modular: unpaired eigenvalue " << h[i] << " of log Delta (partner " << h[n - 1 - i] << ")";
            throw PreconditionError(os.str(), gap);
        }
    }
    DenseOperator gens(n, 2 * n);
    Eigen::Index  c = 0;
    const cplx    I(0.0, 1.0);
    for(Eigen::Index i = 0; i < n; ++i) {
        double hi = h[i];
        if(hi < -tol.pairing) continue;
        CVector ui = u.col(i);
        CVector vi = I * ui;
        double  a = 1.0, b = 1.0;
        if(hi > tol.pairing) {
            a = 1.0 / std::sqrt(1.0 + std::exp(hi));
            b = 1.0 / std::sqrt(1.0 + std::exp(-hi));
        }
        gens.col(c++) = a * ui + b * m.J().apply(ui);
        gens.col(c++) = a * vi + b * m.J().apply(vi);
    }
    auto k = RealSubspace::from_generators(gens.leftCols(c), tol.rank);
    if(k.real_dim() != n) {
        std::ostringstream os;
        os << "subspace_from_modular: fixed-point space has real dimension " << k.real_dim() << ", expected " << n;
        throw PreconditionError(os.str());
    }
    return k;
}

nlohmann::json to_json(const CVector &v) {
    auto out = nlohmann::json::array();
    for(Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
    return out;
}

nlohmann::json to_json(const DenseOperator &a) {
    auto out = nlohmann::json::array();
    for(Eigen::Index i = 0; i < a.rows(); ++i) out.push_back(to_json(CVector(a.row(i).transpose())));
    return out;
}

nlohmann::json to_json(const RealSubspace &k) {
    nlohmann::json j;
    j["ambient_dim"] = k.ambient_dim();
    j["real_dim"]    = k.real_dim();
    j["eps_rank"]    = k.eps_rank();
    auto basis       = nlohmann::json::array();
    auto cb          = k.complex_basis();
    for(Eigen::Index c = 0; c < cb.cols(); ++c) basis.push_back(to_json(CVector(cb.col(c))));
    j["basis"] = basis;
    return j;
}

nlohmann::json to_json(const ModularData &m) {
    nlohmann::json j;
    j["dim"]        = m.dim();
    j["J"]          = to_json(m.J().matrix());
    j["log_delta"]  = to_json(m.log_delta());
    std::vector<double> ev(m.spectrum().eigenvalues.data(), m.spectrum().eigenvalues.data() + m.dim());
    j["log_delta_spectrum"] = ev;
    return j;
}

RealSubspace real_subspace_from_json(const nlohmann::json &j) {
    Eigen::Index n   = j.at("ambient_dim").get<Eigen::Index>();
    double       eps = j.value("eps_rank", 1e-9);
    const auto  &b   = j.at("basis");
    DenseOperator g(n, static_cast<Eigen::Index>(b.size()));
    for(std::size_t c = 0; c < b.size(); ++c) {
        if(b[c].size() != static_cast<std::size_t>(n)) throw DimensionError("basis vector length differs from ambient_dim");
        for(Eigen::Index i = 0; i < n; ++i) g(i, static_cast<Eigen::Index>(c)) = cplx(b[c][i][0].get<double>(), b[c][i][1].get<double>());
    }
    return RealSubspace::from_generators(g, eps);
}

} // namespace modloc
