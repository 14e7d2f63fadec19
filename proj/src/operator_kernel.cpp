#include "modloc/operator_kernel.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace modloc {

namespace {
    double max_abs(const DenseOperator &a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
}

double hermitian_residual(const DenseOperator &a) {
    if(a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
    return max_abs(a - a.adjoint()) / scale;
}

double relative_residual(const DenseOperator &a, const DenseOperator &b) {
    double scale = std::max({max_abs(a), max_abs(b), std::numeric_limits<double>::min()});
    return max_abs(a - b) / scale;
}

std::uint64_t operator_hash(const DenseOperator &a) {
    std::uint64_t h    = 1469598103934665603ull;
    auto          feed = [&h](const void *p, std::size_t n) {
        auto b = static_cast<const unsigned char *>(p);
        for(std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    Eigen::Index r = a.rows(), c = a.cols();
    feed(&r, sizeof r);
    feed(&c, sizeof c);
    for(Eigen::Index j = 0; j < c; ++j)
        for(Eigen::Index i = 0; i < r; ++i) {
            double re = a(i, j).real(), im = a(i, j).imag();
            feed(&re, sizeof re);
            feed(&im, sizeof im);
        }
    return h;
}

DenseOperator SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
}

DenseOperator SpectralDecomposition::map(const std::function<double(double)> &f) const {
    return map_complex([&f](double x) { return cplx(f(x), 0.0); });
}

DenseOperator SpectralDecomposition::map_complex(const std::function<cplx(double)> &f) const {
    CVector fv(dim());
    for(Eigen::Index i = 0; i < dim(); ++i) {
        fv[i] = f(eigenvalues[i]);
        if(!std::isfinite(fv[i].real()) || !std::isfinite(fv[i].imag())) {
            std::ostringstream os;
            os << "spectral map not finite at eigenvalue " << eigenvalues[i];
            throw RangeError(os.str(), eigenvalues[i]);
        }
    }
    DenseOperator out = eigenvectors * fv.asDiagonal() * eigenvectors.adjoint();
    for(Eigen::Index i = 0; i < out.size(); ++i)
        if(!std::isfinite(out(i).real()) || !std::isfinite(out(i).imag()))
            throw RangeError("spectral map overflowed in reconstruction", eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0);
    return out;
}

SpectralDecomposition eigh(const DenseOperator &a, const Tolerances &tol) {
    if(a.rows() != a.cols() || a.rows() == 0) throw DimensionError("eigh: expected a non-empty square matrix");
    double res = hermitian_residual(a);
    if(res > tol.herm) {
        std::ostringstream os;
        os << "eigh: operator not Hermitian, residual " << res;
        throw PreconditionError(os.str(), res);
    }
    DenseOperator                                  sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(sym);
    if(es.info() != Eigen::Success) throw Error("eigh: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors(), operator_hash(a)};
}

DenseOperator spectral_map(const DenseOperator &a, const std::function<double(double)> &f, const Tolerances &tol) {
    return eigh(a, tol).map(f);
}

DenseOperator AntilinearOperator::conjugate_linear(const DenseOperator &l) const {
    DenseOperator x = a_ * l.conjugate();
    return a_.transpose().partialPivLu().solve(x.transpose()).transpose();
}

PolarDecomposition antilinear_polar(const AntilinearOperator &s, const Tolerances &tol) {
    const auto &a = s.matrix();
    if(a.rows() != a.cols() || a.rows() == 0) throw DimensionError("antilinear_polar: expected a square operator");
    Eigen::JacobiSVD<DenseOperator> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RVector                         sv = svd.singularValues();
    double                          smax = sv[0], smin = sv[sv.size() - 1];
    if(!(smin > tol.rank * smax)) {
        std::ostringstream os;
        os << "antilinear_polar: singular operator, sigma_min/sigma_max = " << (smax > 0 ? smin / smax : 0.0);
        throw RankError(os.str());
    }
    const DenseOperator &u = svd.matrixU();
    const DenseOperator &v = svd.matrixV();
    PolarDecomposition   out;
    out.J               = AntilinearOperator(u * v.adjoint());
    CVector sq          = sv.array().square().matrix().cast<cplx>();
    CVector lg          = (2.0 * sv.array().log()).matrix().cast<cplx>();
    out.delta           = v.conjugate() * sq.asDiagonal() * v.transpose();
    out.log_delta       = v.conjugate() * lg.asDiagonal() * v.transpose();
    out.delta           = 0.5 * (out.delta + out.delta.adjoint()).eval();
    out.log_delta       = 0.5 * (out.log_delta + out.log_delta.adjoint()).eval();
    out.singular_values = sv;
    return out;
}

} // namespace modloc
