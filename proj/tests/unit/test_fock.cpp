#include "modloc/experiment.hpp"

#include <doctest.h>

#include <cmath>

using namespace modloc;

namespace {

const cplx I(0.0, 1.0);

CVector random_small(int n, double radius, Uniform01 &u) {
    CVector h(n);
    for(int i = 0; i < n; ++i) h[i] = cplx(2 * u() - 1, 2 * u() - 1);
    return h * (radius * u() / h.norm());
}

} // namespace

TEST_CASE("basis ordering and dimension") {
    FockBasis b(2, 2);
    CHECK(b.size() == 6);
    CHECK(fock_dim(2, 2) == 6);
    CHECK(fock_dim(1, 2) == 3);
    CHECK(b.occupation(1) == std::vector<int>{1, 0});
    CHECK(b.occupation(2) == std::vector<int>{0, 1});
    CHECK(b.occupation(3) == std::vector<int>{2, 0});
    CHECK(b.index({1, 1}) == 4);
    CHECK(b.index({3, 0}) == -1);
    CHECK(b.raise(b.index({2, 0}), 0) == -1);
}

TEST_CASE("coherent vectors") {
    FockState z = coherent_vector(CVector::Zero(2), 6);
    CHECK(std::abs(z.components[0] - 1.0) < 1e-15);
    CHECK(z.components.tail(z.components.size() - 1).norm() == 0.0);
    CHECK(z.tail == 0.0);

    Uniform01 u(4);
    for(int s = 0; s < 10; ++s) {
        CVector   h = random_small(2, 0.5, u), k = random_small(2, 0.5, u);
        FockState eh = coherent_vector(h, 12), ek = coherent_vector(k, 12);
        cplx      expect = std::exp(h.dot(k));
        CHECK(std::abs(inner(eh, ek) - expect) < 1e-12);
    }
    CVector h(2);
    h << 0.5, 0.0;
    CHECK(coherent_vector(h, 12).tail < 1e-12);
}

TEST_CASE("Weyl operators") {
    Uniform01 u(8);
    FockState psi = coherent_vector(random_small(2, 0.5, u), 12);
    FockState id  = weyl_apply(CVector::Zero(2), psi);
    CHECK((id.components - psi.components).norm() < 1e-15);

    for(int s = 0; s < 10; ++s) {
        CVector   h   = random_small(2, 0.5, u);
        FockState v0  = weyl_apply(h, vacuum(2, 12));
        CVector   ex  = std::exp(-0.25 * h.squaredNorm()) * coherent_vector(CVector(I * h / std::sqrt(2.0)), 12).components;
        CHECK((v0.components - ex).norm() < 1e-10);
        FockState back = weyl_apply(CVector(-h), weyl_apply(h, psi));
        CHECK((back.components - psi.components).norm() < 1e-8);

        CVector   k   = random_small(2, 0.5, u);
        FockState lhs = weyl_apply(h, weyl_apply(k, psi));
        FockState rhs = weyl_apply(CVector(h + k), psi);
        CHECK((lhs.components - weyl_multiplier(h, k) * rhs.components).norm() < 1e-6);
    }
}

TEST_CASE("second quantization") {
    FockBasis     b(2, 4);
    DenseOperator g = second_quantize(DenseOperator::Identity(2, 2), b);
    CHECK((g - DenseOperator::Identity(b.size(), b.size())).norm() < 1e-14);

    Uniform01    u(3);
    RealSubspace k  = random_standard_subspace(2, u);
    ModularData  m  = modular_from_subspace(k);
    auto         sq = second_quantized_modular(m, 4, 0.3);
    CHECK(grading_residual(sq.gamma_delta_it, b) == 0.0);
    CHECK((sq.gamma_delta_it * sq.gamma_delta_it.adjoint() - DenseOperator::Identity(b.size(), b.size())).norm() < 1e-10);

    // Gamma(L) e^h = e^{L h}
    CVector   h  = random_small(2, 0.5, u);
    FockState eh = coherent_vector(h, 4);
    CHECK((sq.gamma_delta_it * eh.components - coherent_vector(CVector(m.delta_it(0.3) * h), 4).components).norm() < 1e-12);
}

TEST_CASE("cyclicity rank") {
    auto full = cyclicity_rank(RealSubspace::real_part(1), 9, 2, 1);
    CHECK(full.full());
    CHECK(full.rank == 3);

    DenseOperator g(2, 1);
    g << 1.0, 0.0;
    auto def = cyclicity_rank(RealSubspace::from_generators(g), 36, 2, 1);
    CHECK_FALSE(def.full());

    auto zero = cyclicity_rank(RealSubspace::zero(1), 9, 2, 1);
    CHECK(zero.rank == 1);
    CHECK_THROWS_AS(cyclicity_rank(RealSubspace::real_part(1), 2, 2, 1), PreconditionError);
}
