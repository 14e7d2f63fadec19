#pragma once

#include "modloc/standard_subspace.hpp"

#include <cstdint>
#include <json.hpp>
#include <map>
#include <vector>

namespace modloc {

// Symmetric Fock space over C^n cut at total particle number n_max.
// Basis: occupation vectors alpha, ordered by total number, then lexicographically descending
// (n = 2: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...).
class FockBasis {
    int                                n_ = 0, n_max_ = 0;
    std::vector<std::vector<int>>      occ_;
    std::map<std::vector<int>, int>    index_;
    std::vector<int>                   degree_start_;
    std::vector<std::vector<int>>      up_; // up_[idx][j] = index of alpha + e_j, -1 beyond the cutoff

    public:
    FockBasis() = default;
    FockBasis(int n, int n_max);

    [[nodiscard]] int  n() const { return n_; }
    [[nodiscard]] int  n_max() const { return n_max_; }
    [[nodiscard]] int  size() const { return static_cast<int>(occ_.size()); }
    [[nodiscard]] const std::vector<int> &occupation(int idx) const { return occ_[static_cast<std::size_t>(idx)]; }
    [[nodiscard]] int  index(const std::vector<int> &alpha) const; // -1 if absent
    [[nodiscard]] int  degree_begin(int k) const { return degree_start_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] int  degree_end(int k) const { return degree_start_[static_cast<std::size_t>(k) + 1]; }
    [[nodiscard]] int  raise(int idx, int j) const { return up_[static_cast<std::size_t>(idx)][static_cast<std::size_t>(j)]; }
    [[nodiscard]] int  degree(int idx) const;
};

// Number of occupation vectors in C^n up to total number n_max.
Eigen::Index fock_dim(int n, int n_max);

struct FockState {
    int     n     = 0;
    int     n_max = 0;
    CVector components;
    double  tail = 0.0; // bound on the squared norm discarded by the cutoff

    [[nodiscard]] double norm() const { return components.norm(); }
};
nlohmann::json to_json(const FockState &s);

// sum_{k > n_max} x^k / k!
double exp_tail(double x, int n_max);

FockState vacuum(int n, int n_max);
// e^h = sum_k h^{(x)k} / sqrt(k!), components h^alpha / sqrt(alpha!)
FockState coherent_vector(const CVector &h, int n_max);
// <e^h, e^k> within the cutoff
cplx inner(const FockState &a, const FockState &b);

// V(h) = exp(i (a*(h) + a(h)) / sqrt 2) = e^{-|h|^2/4} exp(i a*(h)/sqrt 2) exp(i a(h)/sqrt 2).
// On coherent vectors V(h) e^k = exp(-|h|^2/4 + i<h,k>/sqrt 2) e^{k + ih/sqrt 2}, so that
// V(h) V(k) = exp(-(i/2) Im<h,k>) V(h+k) with <.,.> antilinear in the first slot.
// The creation part is evaluated on an enlarged cutoff; weight pushed above n_max is added to the tail.
FockState weyl_apply(const CVector &h, const FockState &psi);
cplx      weyl_multiplier(const CVector &h, const CVector &k);

// Gamma(L) on the truncated space, block diagonal in particle number
DenseOperator      second_quantize(const DenseOperator &l, const FockBasis &basis);
AntilinearOperator second_quantize(const AntilinearOperator &s, const FockBasis &basis);

struct SecondQuantizedModular {
    AntilinearOperator gamma_j;
    DenseOperator      gamma_delta_it;
    double             t = 0.0;
};
SecondQuantizedModular second_quantized_modular(const ModularData &m, int n_max, double t);

// largest |Gamma(L)_{b,a}| with deg a != deg b
double grading_residual(const DenseOperator &gamma, const FockBasis &basis);

struct CyclicityReport {
    Eigen::Index rank      = 0;
    Eigen::Index fock_dim  = 0;
    int          samples   = 0;
    double       min_kept_eigenvalue = 0.0; // relative to the largest Gram eigenvalue
    RVector      gram_eigenvalues;          // descending
    [[nodiscard]] bool full() const { return rank == fock_dim; }
};
// rank of span{V(h) Omega : h = sum c_i b_i, c_i uniform on [-coeff, coeff]} over the real basis b_i of K
CyclicityReport cyclicity_rank(const RealSubspace &k, int sample_count, int n_max, std::uint64_t seed, double eps_rank = 1e-9,
                               double coeff = 0.3);
nlohmann::json  to_json(const CyclicityReport &r);

} // namespace modloc
