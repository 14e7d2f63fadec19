#include "modloc/experiment.hpp"

#include <doctest.h>

#include <cmath>

using namespace modloc;

namespace {

RealSubspace span(std::initializer_list<std::initializer_list<cplx>> cols, Eigen::Index n) {
    DenseOperator g(n, static_cast<Eigen::Index>(cols.size()));
    Eigen::Index  c = 0;
    for(const auto &col : cols) {
        Eigen::Index r = 0;
        for(cplx x : col) g(r++, c) = x;
        ++c;
    }
    return RealSubspace::from_generators(g);
}

const cplx I(0.0, 1.0);

} // namespace

TEST_CASE("symplectic complement on C^1") {
    RealSubspace k  = RealSubspace::real_part(1);
    RealSubspace kp = symplectic_complement(k);
    CHECK(subspace_equal(kp, k));
    CHECK(symplectic_complement(RealSubspace::zero(1)).real_dim() == 2);
}

TEST_CASE("double complement returns K") {
    Uniform01 u(5);
    for(int s = 0; s < 5; ++s) {
        DenseOperator g(3, 2);
        for(Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = cplx(2 * u() - 1, 2 * u() - 1);
        RealSubspace k = RealSubspace::from_generators(g);
        CHECK(subspace_distance(symplectic_complement(symplectic_complement(k)), k) < 1e-9);
    }
}

TEST_CASE("standardness verdicts") {
    CHECK(standardness(RealSubspace::real_part(1)).verdict == Standardness::standard);

    auto sep = standardness(span({{1.0, 0.0}, {I, 0.0}}, 2));
    // K + iK = C x {0} as well, so cyclicity fails too
    CHECK(sep.verdict == Standardness::both);
    CHECK(sep.separating_defect == 2);
    REQUIRE(sep.separating_witness);
    CHECK(std::abs((*sep.separating_witness)[1]) < 1e-12);

    auto cyc = standardness(span({{1.0, 0.0}}, 2));
    CHECK(cyc.verdict == Standardness::fails_cyclic);
    CHECK(cyc.cyclic_defect == 2);
}

TEST_CASE("modular data of R^n is (C, 1)") {
    ModularData m = modular_from_subspace(RealSubspace::real_part(3));
    CHECK((m.J().matrix() - DenseOperator::Identity(3, 3)).norm() < 1e-12);
    CHECK(m.log_delta().norm() < 1e-12);
    CHECK(subspace_equal(subspace_from_modular(m), RealSubspace::real_part(3)));
}

TEST_CASE("modular data of a rotated real line") {
    const double phi = 0.7;
    ModularData  m   = modular_from_subspace(span({{std::exp(I * phi)}}, 1));
    CHECK(std::abs(m.J().matrix()(0, 0) - std::exp(2.0 * I * phi)) < 1e-12);
    CHECK(m.log_delta().norm() < 1e-12);
}

TEST_CASE("round trip and modular identities on random standard subspaces") {
    Uniform01  u(9);
    Tolerances tol;
    tol.rank = 1e-8;
    for(int n = 2; n <= 6; ++n) {
        RealSubspace k  = random_standard_subspace(n, u).with_eps(1e-8);
        ModularData  m  = modular_from_subspace(k, tol);
        CHECK(subspace_equal(subspace_from_modular(m, tol), k));
        CHECK(delta_inversion_residual(m) < 1e-10);
        CHECK(tomita_square_residual(m) < 1e-10);
        // K' has modular data (J, Delta^-1)
        ModularData mp = modular_from_subspace(symplectic_complement(k), tol);
        CHECK((mp.J().matrix() - m.J().matrix()).norm() < 1e-10);
        CHECK((mp.log_delta() + m.log_delta()).norm() < 1e-8);
        CHECK(subspace_equal(k.image(m.J()), symplectic_complement(k)));
    }
}

TEST_CASE("lattice identities") {
    Uniform01    u(2);
    RealSubspace k = random_standard_subspace(3, u);
    CHECK(subspace_equal(meet(k, k), k));
    CHECK(meet(span({{1.0, 0.0}}, 2), span({{0.0, 1.0}}, 2)).real_dim() == 0);

    DenseOperator g1(3, 2), g2(3, 2);
    for(Eigen::Index i = 0; i < 6; ++i) {
        g1.data()[i] = cplx(2 * u() - 1, 2 * u() - 1);
        g2.data()[i] = cplx(2 * u() - 1, 2 * u() - 1);
    }
    RealSubspace k1 = RealSubspace::from_generators(g1), k2 = RealSubspace::from_generators(g2);
    // (K1 join K2)' = K1' meet K2'
    CHECK(subspace_distance(symplectic_complement(join(k1, k2)), meet(symplectic_complement(k1), symplectic_complement(k2))) < 1e-9);
}

TEST_CASE("factor classification of the trivial control") {
    auto f = factor_classify(RealSubspace::real_part(1));
    CHECK_FALSE(f.factor);
    CHECK(f.center_real_dim == 1);
}

TEST_CASE("modular data reject an overflowing spectrum") {
    DenseOperator ld = DenseOperator::Zero(2, 2);
    ld(0, 0)         = 800.0;
    ld(1, 1)         = -800.0;
    DenseOperator jm = DenseOperator::Zero(2, 2);
    jm(0, 1) = jm(1, 0) = 1.0;
    ModularData m(AntilinearOperator(jm), ld);
    CHECK_THROWS_AS(m.delta(), RangeError);
    CHECK(m.delta_it(0.1).norm() > 0);
}
