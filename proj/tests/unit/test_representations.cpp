#include "modloc/representations.hpp"

#include <doctest.h>

#include <cmath>

using namespace modloc;

namespace {

RVector v2(double x0, double x1) { return (RVector(2) << x0, x1).finished(); }

const ValidationEntry &entry(const BuiltModel &b, const std::string &id) {
    for(const auto &e : b.report.entries)
        if(e.identity == id) return e;
    throw std::runtime_error("no entry " + id);
}

} // namespace

TEST_CASE("rapidity construction is exactly J-odd") {
    BuiltModel b = build_model({"rapidity", 1.0, 16, 1.0, 1, 1.0});
    CHECK(entry(b, "J H J + H = 0").residual == 0.0);
    CHECK(entry(b, "D + D^T = 0").exact);
    CHECK_THROWS_AS(RapidityModel(1.0, 1, 1.0), ConstructionError);
    CHECK_THROWS_AS(build_model({"unknown"}), ConstructionError);
}

TEST_CASE("sphere model relations") {
    for(int j : {1, 2, 3}) {
        BuiltModel b = build_model({"sphere", 1.0, 1, 1.0, j, 1.0});
        for(const auto &e : b.report.entries) CHECK(e.residual <= 1e-12);
        const auto &s = std::get<SphereToyModel>(b.model);
        CHECK(s.dim() == 2 * j + 1);
    }
}

TEST_CASE("group operators") {
    BuiltModel b = build_model({"rapidity", 1.0, 16, 1.0, 1, 1.0});
    auto       e = group_operator(b.model, PoincareElement::identity(2));
    CHECK_FALSE(e.antilinear);
    CHECK((e.matrix - DenseOperator::Identity(16, 16)).norm() < 1e-12);

    BuiltModel         sb = build_model({"sphere", 1.0, 1, 1.0, 1, 1.0});
    SphereGroupElement g{Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix(), 0.4, false};
    auto               p = group_operator(sb.model, g) * group_operator(sb.model, g.inverse());
    CHECK((p.matrix - DenseOperator::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(group_operator(sb.model, PoincareElement::identity(2)), UnsupportedError);
}

TEST_CASE("boost covariance of translations improves with N") {
    // strong convergence on a fixed smooth vector; the compressed operators do not converge in norm
    const double t = 0.1;
    RVector      a = v2(0.2, 0.0);
    double       prev = INFINITY;
    for(int n : {32, 64, 128}) {
        RapidityModel   r(1.0, n, 0.3);
        PoincareElement l   = PoincareElement::boost(2, t);
        CVector         psi = mass_shell_embedding(r, {Bump{1.0, 0.0, 0.0, 1.0}});
        CVector         lhs = r.boost(t) * (r.translation(a) * (r.boost(-t) * psi));
        double          res = (lhs - r.translation(l.apply(a)) * psi).norm() / psi.norm();
        CHECK(res <= prev);
        prev = res;
    }
}

TEST_CASE("wedge modular data") {
    Tolerances tol;
    BuiltModel b = build_model({"rapidity", 1.0, 32, 0.3, 1, 1.0}, tol);
    ModularData m = wedge_modular_data(b.model, Wedge::standard(2), tol);
    CHECK(m.reflection_residual() < 1e-10);
    CHECK(m.involution_residual() < 1e-10);

    BuiltModel  sb = build_model({"sphere", 1.0, 1, 1.0, 1, 1.0});
    ModularData sm = wedge_modular_data(sb.model, SphereWedge{}, tol);
    RealSubspace k = subspace_from_modular(sm, tol);
    CHECK(k.real_dim() == 3);
    CHECK(meet(k, symplectic_complement(k)).real_dim() == 1);
    CHECK_THROWS_AS(wedge_modular_data(sb.model, Wedge::standard(2), tol), UnsupportedError);
}

TEST_CASE("mass shell embedding") {
    RapidityModel r(1.0, 64, 0.3);
    // translating the bump multiplies psi by the translation operator
    Bump    f{1.0, 0.0, 0.0, 1.0};
    Bump    g = f;
    g.c0 += 0.1;
    g.c1 += 0.1;
    CVector pf = mass_shell_embedding(r, {f}), pg = mass_shell_embedding(r, {g});
    CHECK((r.translation(v2(0.1, 0.1)) * pf - pg).norm() / pf.norm() < 1e-6);
}

TEST_CASE("bump sampling respects the 6-width margin") {
    BumpFamilySpec spec;
    auto           bumps = sample_bumps_in_wedge(Wedge::standard(2), spec);
    CHECK(bumps.size() == 20);
    for(const auto &b : bumps) CHECK(bump_margin(Wedge::standard(2), b) >= 6.0);
}

TEST_CASE("isotony probe at a = 0 and along a positive direction") {
    RapidityModel  r(1.0, 32, 0.3);
    BumpFamilySpec fam;
    fam.count = 6;
    CHECK(isotony_probe(r, Wedge::standard(2), v2(0, 0), IsotonyMode::plain, fam).residual < 1e-10);
    auto rep = isotony_probe(r, Wedge::standard(2), v2(0, 1), IsotonyMode::plain, fam);
    CHECK(rep.positivity_min_eig >= -1e-10);
    CHECK(rep.reflection_residual < 1e-8);
}

TEST_CASE("twisted conjugation stays an involution") {
    RapidityModel r(1.0, 16, 0.3);
    Model         md = r;
    ModularData   m  = wedge_modular_data(md, Wedge::standard(2));
    DenseOperator vh = twist_half(m);
    DenseOperator v  = vh * vh;
    CHECK((v * v.adjoint() - DenseOperator::Identity(16, 16)).norm() < 1e-10);
    // J V J = V^*, so V J is again an involution
    CHECK((m.J().conjugate_linear(v) - v.adjoint()).norm() < 1e-9);
    CHECK_THROWS_AS(twist_half(m, 0.0), PreconditionError);
}

TEST_CASE("strip probe") {
    RapidityModel r(1.0, 32, 0.3);
    auto          deg = strip_standardness_probe(r, v2(0, 0));
    CHECK(deg.degenerate);
    CHECK(deg.meet_real_dim == 0);
    auto empty = strip_standardness_probe(r, v2(0.5, -0.5));
    CHECK(empty.strip_empty);
    CHECK_THROWS_AS(strip_standardness_probe(r, v2(0.3, 0.5)), PreconditionError);
}

TEST_CASE("PCT doubling") {
    BuiltModel b = build_model({"rapidity", 1.0, 8, 1.0, 1, 1.0});
    const auto &r = std::get<RapidityModel>(b.model);
    auto u = [&](const GroupElement &g) { return group_operator(b.model, g).matrix; };
    auto refl = [](const GroupElement &g) {
        const auto     &p = std::get<PoincareElement>(g);
        PoincareElement rr = PoincareElement::reflection(2);
        return GroupElement(rr * p * rr);
    };
    auto d = pct_double(u, AntilinearOperator::conjugation(r.N()), refl);
    auto rr = d.reflection();
    CHECK(((rr * rr).matrix - DenseOperator::Identity(16, 16)).norm() < 1e-12);
    PoincareElement g = PoincareElement::translation(v2(0.2, 0.5)) * PoincareElement::boost(2, 0.1);
    auto lhs = rr * d(GroupElement(g)) * rr;
    auto rhs = d(d.reflect(GroupElement(g)));
    CHECK(operator_distance(lhs, rhs) < 1e-10);
    CHECK((d(GroupElement(PoincareElement::identity(2))).matrix - DenseOperator::Identity(16, 16)).norm() < 1e-12);
}
