#include "modloc/fock.hpp"

#include "modloc/representations.hpp"

#include <algorithm>
#include <cmath>

namespace modloc {

namespace {

const cplx I(0.0, 1.0);

// all occupation vectors of total k in C^n, lexicographically descending
void compositions(int n, int k, std::vector<int> &cur, int pos, std::vector<std::vector<int>> &out) {
    if(pos == n - 1) {
        cur[static_cast<std::size_t>(pos)] = k;
        out.push_back(cur);
        return;
    }
    for(int a = k; a >= 0; --a) {
        cur[static_cast<std::size_t>(pos)] = a;
        compositions(n, k - a, cur, pos + 1, out);
    }
}

double sqrt_factorial(const std::vector<int> &alpha) {
    double r = 1.0;
    for(int a : alpha)
        for(int i = 2; i <= a; ++i) r *= std::sqrt(static_cast<double>(i));
    return r;
}

// a(h) psi, antilinear in h
CVector annihilate(const FockBasis &b, const CVector &h, const CVector &psi) {
    CVector out = CVector::Zero(psi.size());
    for(int beta = 0; beta < b.size(); ++beta)
        for(int j = 0; j < b.n(); ++j) {
            int g = b.raise(beta, j);
            if(g < 0) continue;
            out[beta] += std::conj(h[j]) * std::sqrt(b.occupation(beta)[static_cast<std::size_t>(j)] + 1.0) * psi[g];
        }
    return out;
}

CVector create(const FockBasis &b, const CVector &h, const CVector &psi) {
    CVector out = CVector::Zero(psi.size());
    for(int beta = 0; beta < b.size(); ++beta) {
        if(psi[beta] == cplx(0.0)) continue;
        for(int j = 0; j < b.n(); ++j) {
            int g = b.raise(beta, j);
            if(g < 0) continue;
            out[g] += h[j] * std::sqrt(b.occupation(beta)[static_cast<std::size_t>(j)] + 1.0) * psi[beta];
        }
    }
    return out;
}

// exp(X) psi for a nilpotent-on-the-cutoff X, summed until the terms vanish
template <class F> CVector exp_series(const F &x, const CVector &psi, int max_terms) {
    CVector sum  = psi;
    CVector term = psi;
    for(int k = 1; k <= max_terms; ++k) {
        term = x(term) / static_cast<double>(k);
        if(term.squaredNorm() == 0.0) break;
        sum += term;
    }
    return sum;
}

} // namespace

FockBasis::FockBasis(int n, int n_max) : n_(n), n_max_(n_max) {
    if(n < 1) throw PreconditionError("FockBasis: one-particle dimension must be positive");
    if(n_max < 0) throw PreconditionError("FockBasis: cutoff must be non-negative");
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    for(int k = 0; k <= n_max; ++k) {
        degree_start_.push_back(static_cast<int>(occ_.size()));
        compositions(n, k, cur, 0, occ_);
    }
    degree_start_.push_back(static_cast<int>(occ_.size()));
    for(int i = 0; i < size(); ++i) index_.emplace(occ_[static_cast<std::size_t>(i)], i);
    up_.assign(occ_.size(), std::vector<int>(static_cast<std::size_t>(n), -1));
    for(int i = 0; i < size(); ++i) {
        std::vector<int> a = occ_[static_cast<std::size_t>(i)];
        for(int j = 0; j < n; ++j) {
            ++a[static_cast<std::size_t>(j)];
            up_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = index(a);
            --a[static_cast<std::size_t>(j)];
        }
    }
}

int FockBasis::index(const std::vector<int> &alpha) const {
    auto it = index_.find(alpha);
    return it == index_.end() ? -1 : it->second;
}

int FockBasis::degree(int idx) const {
    int k = 0;
    while(degree_end(k) <= idx) ++k;
    return k;
}

Eigen::Index fock_dim(int n, int n_max) {
    // binomial(n + n_max, n)
    double r = 1.0;
    for(int i = 1; i <= n; ++i) r = r * (n_max + i) / i;
    return static_cast<Eigen::Index>(std::llround(r));
}

nlohmann::json to_json(const FockState &s) {
    return {{"n", s.n}, {"n_max", s.n_max}, {"components", to_json(s.components)}, {"tail", s.tail}};
}

double exp_tail(double x, int n_max) {
    if(x == 0.0) return 0.0;
    const double lx = std::log(x);
    double       lt = 0.0; // log of x^k / k!
    for(int k = 1; k <= n_max + 1; ++k) lt += lx - std::log(static_cast<double>(k));
    double sum = 0.0;
    for(int k = n_max + 1; k < n_max + 100000; ++k) {
        double t = std::exp(lt);
        sum += t;
        if(k > x && t <= 1e-17 * sum) break;
        lt += lx - std::log(static_cast<double>(k + 1));
    }
    return sum;
}

FockState vacuum(int n, int n_max) {
    FockState s{n, n_max, CVector::Zero(fock_dim(n, n_max)), 0.0};
    s.components[0] = 1.0;
    return s;
}

FockState coherent_vector(const CVector &h, int n_max) {
    const int n = static_cast<int>(h.size());
    FockBasis b(n, n_max);
    FockState s{n, n_max, CVector::Zero(b.size()), exp_tail(h.squaredNorm(), n_max)};
    std::vector<char> done(static_cast<std::size_t>(b.size()), 0);
    s.components[0] = 1.0;
    done[0]         = 1;
    for(int beta = 0; beta < b.size(); ++beta)
        for(int j = 0; j < n; ++j) {
            int g = b.raise(beta, j);
            if(g < 0 || done[static_cast<std::size_t>(g)]) continue;
            s.components[g] = s.components[beta] * h[j] / std::sqrt(b.occupation(beta)[static_cast<std::size_t>(j)] + 1.0);
            done[static_cast<std::size_t>(g)] = 1;
        }
    return s;
}

cplx inner(const FockState &a, const FockState &b) {
    if(a.components.size() != b.components.size()) throw DimensionError("inner: Fock states of different shape");
    return a.components.dot(b.components);
}

FockState weyl_apply(const CVector &h, const FockState &psi) {
    if(h.size() != psi.n) throw DimensionError("weyl_apply: argument dimension does not match the Fock state");
    const int ext = psi.n_max + std::max(8, psi.n_max);
    FockBasis small(psi.n, psi.n_max), big(psi.n, ext);
    const double s2 = std::sqrt(2.0);

    CVector x = exp_series([&](const CVector &v) { return CVector(I / s2 * annihilate(small, h, v)); }, psi.components, psi.n_max + 1);
    CVector y = CVector::Zero(big.size());
    y.head(small.size()) = x; // graded order makes the small basis a prefix
    y = exp_series([&](const CVector &v) { return CVector(I / s2 * create(big, h, v)); }, y, ext + 1);
    y *= std::exp(-0.25 * h.squaredNorm());

    FockState out{psi.n, psi.n_max, y.head(small.size()), psi.tail};
    out.tail += y.tail(big.size() - small.size()).squaredNorm();
    return out;
}

cplx weyl_multiplier(const CVector &h, const CVector &k) { return std::exp(-0.5 * I * h.dot(k).imag()); }

DenseOperator second_quantize(const DenseOperator &l, const FockBasis &basis) {
    if(l.rows() != basis.n() || l.cols() != basis.n()) throw DimensionError("second_quantize: operator dimension does not match the Fock basis");
    const int     dim = basis.size();
    DenseOperator g   = DenseOperator::Zero(dim, dim);
    for(int a = 0; a < dim; ++a) {
        const auto &alpha = basis.occupation(a);
        // coefficients of prod_i (sum_j L_ji x_j)^{alpha_i}, indexed by monomial
        CVector poly = CVector::Zero(dim);
        poly[0]      = 1.0;
        int deg      = 0;
        for(int i = 0; i < basis.n(); ++i)
            for(int rep = 0; rep < alpha[static_cast<std::size_t>(i)]; ++rep) {
                CVector next = CVector::Zero(dim);
                for(int beta = basis.degree_begin(deg); beta < basis.degree_end(deg); ++beta) {
                    if(poly[beta] == cplx(0.0)) continue;
                    for(int j = 0; j < basis.n(); ++j) next[basis.raise(beta, j)] += poly[beta] * l(j, i);
                }
                poly = next;
                ++deg;
            }
        const double sa = sqrt_factorial(alpha);
        for(int beta = basis.degree_begin(deg); beta < basis.degree_end(deg); ++beta)
            g(beta, a) = poly[beta] * sqrt_factorial(basis.occupation(beta)) / sa;
    }
    return g;
}

// the occupation basis is real, so Gamma(A conj) = Gamma(A) conj
AntilinearOperator second_quantize(const AntilinearOperator &s, const FockBasis &basis) {
    return AntilinearOperator(second_quantize(s.matrix(), basis));
}

SecondQuantizedModular second_quantized_modular(const ModularData &m, int n_max, double t) {
    FockBasis b(static_cast<int>(m.dim()), n_max);
    return {second_quantize(m.J(), b), second_quantize(m.delta_it(t), b), t};
}

double grading_residual(const DenseOperator &gamma, const FockBasis &basis) {
    double r = 0.0;
    for(int a = 0; a < basis.size(); ++a)
        for(int b = 0; b < basis.size(); ++b)
            if(basis.degree(a) != basis.degree(b)) r = std::max(r, std::abs(gamma(b, a)));
    return r;
}

CyclicityReport cyclicity_rank(const RealSubspace &k, int sample_count, int n_max, std::uint64_t seed, double eps_rank, double coeff) {
    const int n = static_cast<int>(k.ambient_dim());
    CyclicityReport rep;
    rep.fock_dim = fock_dim(n, n_max);
    rep.samples  = sample_count;
    if(sample_count < rep.fock_dim) throw PreconditionError("cyclicity_rank: sample count below the truncated Fock dimension");
    Uniform01     u(seed);
    DenseOperator kb = k.complex_basis();
    DenseOperator vecs(rep.fock_dim, sample_count);
    const double  s2 = std::sqrt(2.0);
    for(int s = 0; s < sample_count; ++s) {
        CVector h = CVector::Zero(n);
        for(Eigen::Index c = 0; c < kb.cols(); ++c) h += coeff * (2.0 * u() - 1.0) * kb.col(c);
        // V(h) Omega = e^{-|h|^2/4} e^{ih/sqrt 2}
        vecs.col(s) = std::exp(-0.25 * h.squaredNorm()) * coherent_vector(I / s2 * h, n_max).components;
    }
    DenseOperator gram = vecs.adjoint() * vecs;
    gram               = 0.5 * (gram + gram.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(gram);
    rep.gram_eigenvalues = es.eigenvalues().reverse();
    const double top     = std::max(rep.gram_eigenvalues[0], 0.0);
    rep.min_kept_eigenvalue = 1.0;
    for(Eigen::Index i = 0; i < rep.gram_eigenvalues.size(); ++i)
        if(top > 0.0 && rep.gram_eigenvalues[i] > eps_rank * top) {
            ++rep.rank;
            rep.min_kept_eigenvalue = rep.gram_eigenvalues[i] / top;
        }
    return rep;
}

nlohmann::json to_json(const CyclicityReport &r) {
    return {{"rank", r.rank},
            {"fock_dim", r.fock_dim},
            {"samples", r.samples},
            {"full", r.full()},
            {"min_kept_eigenvalue", r.min_kept_eigenvalue}};
}

} // namespace modloc
