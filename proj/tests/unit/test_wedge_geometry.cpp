#include "modloc/wedge_geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace modloc;

namespace {

RVector v2(double x0, double x1) { return (RVector(2) << x0, x1).finished(); }

} // namespace

TEST_CASE("wedge transformations") {
    for(Eigen::Index d : {2, 4}) {
        Wedge w1 = Wedge::standard(d);
        CHECK(wedge_equal(transform_wedge(PoincareElement::identity(d), w1), w1));
        CHECK(wedge_equal(transform_wedge(PoincareElement::reflection(d), w1), causal_complement(w1)));
        CHECK(wedge_equal(transform_wedge(PoincareElement::boost(d, 0.3), w1), w1));
        CHECK(PoincareElement::boost(d, 0.3).metric_residual() < 1e-12);
    }
}

TEST_CASE("causal complement") {
    Wedge w1 = Wedge::standard(2);
    CHECK(wedge_equal(causal_complement(causal_complement(w1)), w1));
    RVector a = v2(0.4, -1.3);
    CHECK(wedge_equal(causal_complement(w1.translated(a)), causal_complement(w1).translated(a)));
    // d = 2: W1' = -W1
    Wedge wp = causal_complement(w1);
    for(const RVector &x : {v2(0.1, 1.0), v2(-0.5, 2.0), v2(0.9, 1.0)}) CHECK(wp.contains(-x) == w1.contains(x));
}

TEST_CASE("wedge inclusion in d = 2") {
    Wedge w1 = Wedge::standard(2);
    CHECK(wedge_inclusion(w1.translated(v2(0, 1)), w1).included);
    auto r = wedge_inclusion(w1.translated(v2(0, -1)), w1);
    CHECK_FALSE(r.included);
    REQUIRE(r.witness);
    CHECK(w1.translated(v2(0, -1)).contains(*r.witness));
    CHECK_FALSE(w1.contains(*r.witness));
}

TEST_CASE("positive inclusion chains") {
    Wedge w1 = Wedge::standard(2);
    CHECK(positive_inclusion_chain(w1, w1).steps.empty());

    auto cert = positive_inclusion_chain(w1.translated(v2(0, 1)), w1);
    REQUIRE(cert.steps.size() == 2);
    RVector sum = RVector::Zero(2);
    for(const auto &s : cert.steps) {
        CHECK(s.a0 >= 0);
        CHECK(std::abs(minkowski(s.h, s.h)) < 1e-12);
        sum += s.a0 * s.h;
    }
    CHECK((sum - v2(0, 1)).norm() < 1e-12);

    Wedge inner = w1.translated(v2(0.3, 0.7));
    auto  c2    = positive_inclusion_chain(inner, w1);
    CHECK(wedge_equal(apply_certificate(c2), inner));
    CHECK_THROWS_AS(positive_inclusion_chain(w1.translated(v2(0, -1)), w1), InclusionError);
}

TEST_CASE("covering families") {
    RVector a = v2(0, -1), b = v2(0, 1);
    auto    fam = covering_family(Region::double_cone_2d(a, b));
    CHECK(fam.wedges.size() == 2);
    CHECK(Region::double_cone_2d(a, b).contains(v2(0, 0)));
    CHECK_FALSE(Region::double_cone_2d(a, b).contains(v2(0, 2)));

    auto strip = covering_family(Region::lightlike_strip(Wedge::standard(2), v2(-0.5, 0.5)));
    CHECK(strip.wedges.size() == 2);

    Eigen::Matrix3d gens = Eigen::Matrix3d::Identity();
    auto            cone = Region::spacelike_cone(RVector::Zero(4), gens);
    auto            cf   = covering_family(cone);
    CHECK(cf.wedges.size() == 3);
    RVector inside(4), outside(4);
    inside << 0.0, 1.0, 1.0, 1.0;
    outside << 0.0, -1.0, 1.0, 1.0;
    CHECK(cone.contains(inside));
    CHECK_FALSE(cone.contains(outside));
}

TEST_CASE("canonical keys are stable under equivalent representatives") {
    Wedge w1 = Wedge::standard(2);
    Wedge wb = transform_wedge(PoincareElement::boost(2, 0.25), w1);
    CHECK(Region::wedge(w1).canonical_key() == Region::wedge(wb).canonical_key());
    CHECK(Region::wedge(w1).canonical_key() != Region::wedge(causal_complement(w1)).canonical_key());
}

TEST_CASE("separating wedge for spacelike regions") {
    Wedge w1 = Wedge::standard(2);
    auto  s  = separating_wedge(Region::wedge(w1.translated(v2(0, 1))), Region::wedge(causal_complement(w1)));
    CHECK(s.has_value());
}
