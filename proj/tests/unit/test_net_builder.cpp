#include "modloc/net_builder.hpp"

#include <doctest.h>

#include <thread>

using namespace modloc;

namespace {

RVector v2(double x0, double x1) { return (RVector(2) << x0, x1).finished(); }

LocalNet rapidity(int n) { return LocalNet(build_model({"rapidity", 1.0, n, 0.3, 1, 1.0})); }

} // namespace

TEST_CASE("wedge consistency and duality in the rapidity model") {
    LocalNet net = rapidity(32);
    Wedge    w1  = Wedge::standard(2);
    CHECK(net.wedge_consistency(w1) < 1e-9);
    RealSubspace k = net.wedge_space(w1);
    CHECK(subspace_distance(net.wedge_space(causal_complement(w1)), symplectic_complement(k)) < 1e-9);
    CHECK(factor_classify(k).factor);
    SpectralGap g = spectral_gap(wedge_modular_data(net.model().model, w1));
    CHECK(g.unit_eigenspace_dim == 0);
    CHECK(g.min_gap > 0);
}

TEST_CASE("double cone and nested inclusions") {
    LocalNet     net = rapidity(32);
    Region       big = Region::double_cone_2d(v2(0, -1), v2(0, 1));
    Region       small = Region::double_cone_2d(v2(0, -0.5), v2(0, 0.5));
    RealSubspace kb  = net.local_space(big);
    RealSubspace kw  = meet(net.wedge_space(Wedge::standard(2).translated(v2(0, -1))), net.wedge_space(Wedge::standard_complement(2).translated(v2(0, 1))));
    CHECK(subspace_equal(kb, kw));
    auto e = net.record_inclusion(small, big);
    CHECK(net.local_space(small).real_dim() <= kb.real_dim());
    CHECK(e.holds);
    CHECK(net.isotony_ledger().size() == 1);
}

TEST_CASE("cache is shared between threads and cleared on new tolerances") {
    LocalNet                 net = rapidity(16);
    std::vector<std::thread> ts;
    std::vector<Eigen::Index> dims(4);
    for(int i = 0; i < 4; ++i) ts.emplace_back([&, i] { dims[static_cast<std::size_t>(i)] = net.wedge_space(Wedge::standard(2)).real_dim(); });
    for(auto &t : ts) t.join();
    for(auto d : dims) CHECK(d == dims[0]);
    CHECK(net.cache_size() == 1);
    net.set_tolerances(Tolerances{});
    CHECK(net.cache_size() == 0);
}

TEST_CASE("sphere toy net") {
    LocalNet     net(build_model({"sphere", 1.0, 1, 1.0, 1, 1.0}));
    SphereWedge  w0;
    RealSubspace k = net.wedge_space(w0);
    CHECK(subspace_distance(net.wedge_space(w0.complement()), symplectic_complement(k)) <= 1e-12);
    auto f = factor_classify(k);
    CHECK_FALSE(f.factor);
    CHECK(f.center_real_dim == 1);
    std::optional<RealSubspace> acc;
    for(const auto &w : coordinate_hemispheres()) acc = acc ? meet(*acc, net.wedge_space(w)) : net.wedge_space(w);
    CHECK(acc->real_dim() == 0);
    CHECK(net.local_space(SphereRegion{coordinate_hemispheres()}).real_dim() == 0);
}

TEST_CASE("trivial control is not irreducible") {
    LocalNet     net(build_model({"trivial"}));
    RealSubspace k1 = net.wedge_space(Wedge::standard(2));
    RealSubspace k2 = net.wedge_space(Wedge::standard(2).translated(v2(0.3, 0.7)));
    CHECK(subspace_equal(k1, k2));
    CHECK(meet(k1, net.wedge_space(Wedge::standard_complement(2))).real_dim() == 1);
}

TEST_CASE("locality between separated regions") {
    LocalNet net = rapidity(32);
    auto     r   = net.locality(Region::double_cone_2d(v2(0, -1), v2(0, 1)), Region::wedge(Wedge::standard(2).translated(v2(0, 3))));
    CHECK(r.separated);
    CHECK(r.holds);
}

TEST_CASE("net report checks the trivial control") {
    LocalNet        net(build_model({"trivial"}));
    NetReportConfig cfg;
    auto            rep = net_report(net, cfg);
    CHECK_FALSE(rep.checks.empty());
    for(const auto &c : rep.checks) CHECK_MESSAGE(c.status != "fail", c.name);
    auto j = to_json(rep, net, 1);
    CHECK(j.contains("provenance"));
    CHECK(j["version"] == library_version);
}
