#pragma once

#include "modloc/operator_kernel.hpp"

#include <json.hpp>
#include <optional>
#include <string>

namespace modloc {

// (Re x, Im x) stacked, column by column
RMatrix       realify(const DenseOperator &x);
RVector       realify(const CVector &x);
DenseOperator complexify(const RMatrix &x);
CVector       complexify(const RVector &x);

// Real-linear subspace of C^n, stored as an orthonormal basis of its image in R^{2n}.
class RealSubspace {
    Eigen::Index n_ = 0;
    RMatrix      basis_;
    double       eps_rank_ = 1e-9;

    public:
    RealSubspace() = default;
    static RealSubspace from_generators(const DenseOperator &gens, double eps_rank = 1e-9);
    static RealSubspace from_real(const RMatrix &gens, double eps_rank = 1e-9);
    static RealSubspace from_orthonormal(RMatrix basis, double eps_rank = 1e-9);
    static RealSubspace zero(Eigen::Index n, double eps_rank = 1e-9);
    static RealSubspace full(Eigen::Index n, double eps_rank = 1e-9);
    static RealSubspace real_part(Eigen::Index n, double eps_rank = 1e-9); // R^n

    [[nodiscard]] Eigen::Index   ambient_dim() const { return n_; }
    [[nodiscard]] Eigen::Index   real_dim() const { return basis_.cols(); }
    [[nodiscard]] double         eps_rank() const { return eps_rank_; }
    [[nodiscard]] const RMatrix &basis() const { return basis_; }
    [[nodiscard]] DenseOperator  complex_basis() const { return complexify(basis_); }

    [[nodiscard]] CVector project(const CVector &x) const;
    // |x - P x| / |x|
    [[nodiscard]] double distance(const CVector &x) const;
    [[nodiscard]] bool   contains(const CVector &x) const { return distance(x) <= eps_rank_; }

    [[nodiscard]] RealSubspace image(const DenseOperator &l) const;
    [[nodiscard]] RealSubspace image(const AntilinearOperator &s) const;
    [[nodiscard]] RealSubspace times_i() const;
    [[nodiscard]] RealSubspace orthogonal_complement() const;
    [[nodiscard]] RealSubspace with_eps(double eps) const;
};

RealSubspace symplectic_complement(const RealSubspace &k);

enum class LatticeOp { meet, join };
RealSubspace lattice_op(LatticeOp op, const RealSubspace &k1, const RealSubspace &k2);
RealSubspace meet(const RealSubspace &k1, const RealSubspace &k2);
RealSubspace join(const RealSubspace &k1, const RealSubspace &k2);

// sines of the principal angles of k1 relative to k2, ascending
RVector principal_sines(const RealSubspace &k1, const RealSubspace &k2);
// max principal sine in both directions; 1 if exactly one side is {0}
double subspace_distance(const RealSubspace &k1, const RealSubspace &k2);
bool   subspace_equal(const RealSubspace &k1, const RealSubspace &k2);
bool   subspace_included(const RealSubspace &inner, const RealSubspace &outer);

enum class Standardness { standard, fails_separating, fails_cyclic, both };
std::string to_string(Standardness s);

struct StandardnessReport {
    Standardness           verdict = Standardness::standard;
    Eigen::Index           separating_defect = 0; // real_dim(K meet iK)
    Eigen::Index           cyclic_defect     = 0; // 2n - real_dim(K join iK)
    std::optional<CVector> separating_witness;
    std::optional<CVector> cyclic_witness;
};
StandardnessReport standardness(const RealSubspace &k);

struct FactorReport {
    bool         factor          = true;
    Eigen::Index center_real_dim = 0;
};
FactorReport factor_classify(const RealSubspace &k);

class ModularData {
    AntilinearOperator    j_;
    DenseOperator         log_delta_;
    SpectralDecomposition spectrum_;

    public:
    ModularData() = default;
    ModularData(AntilinearOperator j, DenseOperator log_delta, const Tolerances &tol = {});

    [[nodiscard]] const AntilinearOperator    &J() const { return j_; }
    [[nodiscard]] const DenseOperator         &log_delta() const { return log_delta_; }
    [[nodiscard]] const SpectralDecomposition &spectrum() const { return spectrum_; }
    [[nodiscard]] Eigen::Index                 dim() const { return log_delta_.rows(); }

    // these throw RangeError when the spectrum cannot be exponentiated in double precision
    [[nodiscard]] DenseOperator      delta() const { return delta_power(1.0); }
    [[nodiscard]] DenseOperator      delta_power(double s) const;
    [[nodiscard]] AntilinearOperator tomita() const;

    [[nodiscard]] DenseOperator delta_it(double t) const;
    [[nodiscard]] ModularData   dual() const { return ModularData(j_, -log_delta_); }

    // J^2 - 1, J logD J + logD (relative to |logD|, or absolute if logD = 0)
    [[nodiscard]] double involution_residual() const;
    [[nodiscard]] double reflection_residual() const;
};

ModularData  modular_from_subspace(const RealSubspace &k, const Tolerances &tol = {});
RealSubspace subspace_from_modular(const ModularData &m, const Tolerances &tol = {});

// S^2 - 1 relative to max(1, |S|^2); JDJ - D^{-1} relative to |D^{-1}|
double tomita_square_residual(const ModularData &m);
double delta_inversion_residual(const ModularData &m);

nlohmann::json to_json(const CVector &v);
nlohmann::json to_json(const DenseOperator &a);
nlohmann::json to_json(const RealSubspace &k);
nlohmann::json to_json(const ModularData &m);
RealSubspace   real_subspace_from_json(const nlohmann::json &j);

} // namespace modloc
