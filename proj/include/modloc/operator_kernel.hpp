#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace modloc {

using cplx          = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using CVector       = Eigen::VectorXcd;
using RMatrix       = Eigen::MatrixXd;
using RVector       = Eigen::VectorXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : Error {
    double residual = 0.0;
    PreconditionError(const std::string &msg, double res = 0.0) : Error(msg), residual(res) {}
};
struct RangeError : Error {
    double eigenvalue = 0.0;
    RangeError(const std::string &msg, double ev) : Error(msg), eigenvalue(ev) {}
};
struct RankError : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct UnsupportedError : Error {
    using Error::Error;
};
struct ConstructionError : Error {
    using Error::Error;
};

struct Tolerances {
    double herm    = 1e-10;
    double spec    = 1e-10;
    double rank    = 1e-9;
    double pairing = 1e-8;
};

// Frobenius-relative Hermiticity defect max|A - A^dagger| / max(|A|, tiny).
double hermitian_residual(const DenseOperator &a);

// Max-entry relative difference, used for exactness reports.
double relative_residual(const DenseOperator &a, const DenseOperator &b);

std::uint64_t operator_hash(const DenseOperator &a);

struct SpectralDecomposition {
    RVector       eigenvalues; // ascending
    DenseOperator eigenvectors;
    std::uint64_t source_hash = 0;

    [[nodiscard]] Eigen::Index  dim() const { return eigenvalues.size(); }
    [[nodiscard]] DenseOperator reconstruct() const;
    [[nodiscard]] DenseOperator map(const std::function<double(double)> &f) const;
    [[nodiscard]] DenseOperator map_complex(const std::function<cplx(double)> &f) const;
};

SpectralDecomposition eigh(const DenseOperator &a, const Tolerances &tol = {});

DenseOperator spectral_map(const DenseOperator &a, const std::function<double(double)> &f, const Tolerances &tol = {});

// x -> A conj(x)
class AntilinearOperator {
    DenseOperator a_;

    public:
    AntilinearOperator() = default;
    explicit AntilinearOperator(DenseOperator a) : a_(std::move(a)) {}
    static AntilinearOperator conjugation(Eigen::Index n) { return AntilinearOperator(DenseOperator::Identity(n, n)); }

    [[nodiscard]] const DenseOperator &matrix() const { return a_; }
    [[nodiscard]] Eigen::Index         dim() const { return a_.rows(); }

    [[nodiscard]] CVector       apply(const CVector &x) const { return a_ * x.conjugate(); }
    [[nodiscard]] DenseOperator apply(const DenseOperator &x) const { return a_ * x.conjugate(); }

    // this o other, both antilinear: linear with matrix A1 conj(A2)
    [[nodiscard]] DenseOperator compose(const AntilinearOperator &other) const { return a_ * other.a_.conjugate(); }
    // this o L
    [[nodiscard]] AntilinearOperator after(const DenseOperator &l) const { return AntilinearOperator(a_ * l.conjugate()); }
    // L o this
    [[nodiscard]] AntilinearOperator before(const DenseOperator &l) const { return AntilinearOperator(l * a_); }
    // S L S^{-1} for invertible S, linear
    [[nodiscard]] DenseOperator conjugate_linear(const DenseOperator &l) const;
    [[nodiscard]] AntilinearOperator adjoint() const { return AntilinearOperator(a_.transpose()); }
    [[nodiscard]] AntilinearOperator inverse() const { return AntilinearOperator(a_.inverse().conjugate()); }
};

struct PolarDecomposition {
    AntilinearOperator J;
    DenseOperator      delta;
    DenseOperator      log_delta;
    RVector            singular_values;
};

// S = J Delta^{1/2}, Delta = S* S
PolarDecomposition antilinear_polar(const AntilinearOperator &s, const Tolerances &tol = {});

} // namespace modloc
