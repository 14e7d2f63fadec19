#include "modloc/operator_kernel.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace modloc;

namespace {

DenseOperator random_hermitian(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    DenseOperator                    a(n, n);
    for(int i = 0; i < n; ++i)
        for(int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
    return (a + a.adjoint()) / 2.0;
}

} // namespace

TEST_CASE("spectral_map on diagonal and zero matrices") {
    DenseOperator a = DenseOperator::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    CHECK((spectral_map(a, [](double t) { return t; }) - a).norm() < 1e-14);

    DenseOperator z = DenseOperator::Zero(2, 2);
    CHECK((spectral_map(z, [](double t) { return std::exp(t); }) - DenseOperator::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("spectral_map of t^2 matches the matrix square") {
    std::mt19937_64 rng(7);
    DenseOperator   a  = random_hermitian(6, rng);
    DenseOperator   sq = spectral_map(a, [](double t) { return t * t; });
    CHECK((sq - a * a).norm() / (a * a).norm() < 1e-12);
}

TEST_CASE("eigh rejects non-Hermitian input") {
    DenseOperator a = DenseOperator::Zero(2, 2);
    a(0, 1)         = 1.0;
    CHECK_THROWS_AS(eigh(a), PreconditionError);
}

TEST_CASE("eigh eigenvalues ascend and reconstruct") {
    std::mt19937_64 rng(3);
    DenseOperator   a = random_hermitian(5, rng);
    auto            s = eigh(a);
    for(Eigen::Index i = 1; i < s.dim(); ++i) CHECK(s.eigenvalues[i - 1] <= s.eigenvalues[i]);
    CHECK((s.reconstruct() - a).norm() < 1e-12);
    CHECK(s.source_hash == operator_hash(a));
}

TEST_CASE("polar decomposition of plain conjugation") {
    auto p = antilinear_polar(AntilinearOperator::conjugation(2));
    CHECK((p.J.matrix() - DenseOperator::Identity(2, 2)).norm() < 1e-14);
    CHECK((p.delta - DenseOperator::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("polar decomposition of C diag(d) on C^1") {
    const double  d = 2.5;
    DenseOperator a(1, 1);
    a(0, 0) = d;
    auto p  = antilinear_polar(AntilinearOperator(a));
    CHECK(std::abs(p.delta(0, 0) - d * d) < 1e-12);
    CHECK(std::abs(p.J.matrix()(0, 0) - 1.0) < 1e-14);
    // J Delta^{1/2} x = d conj(x)
    CVector x(1);
    x[0]      = cplx(0.3, -1.1);
    CVector y = p.J.apply(CVector(spectral_map(p.delta, [](double t) { return std::sqrt(t); }) * x));
    CHECK(std::abs(y[0] - d * std::conj(x[0])) < 1e-12);
}

TEST_CASE("polar parts satisfy J Delta J = Delta^-1 for an involutive S") {
    std::mt19937_64                  rng(11);
    std::normal_distribution<double> g;
    const int                        n = 4;
    // S = G C G^{-1} is an antilinear involution
    DenseOperator gm(n, n);
    for(int i = 0; i < n; ++i)
        for(int j = 0; j < n; ++j) gm(i, j) = cplx(g(rng), g(rng));
    AntilinearOperator s(gm * gm.inverse().conjugate());
    CHECK((s.compose(s) - DenseOperator::Identity(n, n)).norm() < 1e-10);
    auto          p   = antilinear_polar(s);
    DenseOperator jdj = p.J.conjugate_linear(p.delta);
    DenseOperator di  = p.delta.inverse();
    CHECK((jdj - di).norm() / di.norm() < 1e-10);
    CHECK((p.J.compose(p.J) - DenseOperator::Identity(n, n)).norm() < 1e-10);
}
