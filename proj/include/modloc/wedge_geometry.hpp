#pragma once

#include "modloc/operator_kernel.hpp"

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace modloc {

RMatrix minkowski_metric(Eigen::Index d);
double  minkowski(const RVector &x, const RVector &y);

class PoincareElement {
    RMatrix lambda_;
    RVector a_;

    public:
    PoincareElement() = default;
    // throws PreconditionError if lambda is not a proper Lorentz matrix within 1e-12
    PoincareElement(RMatrix lambda, RVector a);

    static PoincareElement identity(Eigen::Index d);
    static PoincareElement translation(const RVector &a);
    static PoincareElement boost(Eigen::Index d, double t); // Lambda_{W1}(t), rescaled by 2 pi
    static PoincareElement reflection(Eigen::Index d);      // R_{W1}

    [[nodiscard]] Eigen::Index   d() const { return lambda_.rows(); }
    [[nodiscard]] const RMatrix &lambda() const { return lambda_; }
    [[nodiscard]] const RVector &a() const { return a_; }
    [[nodiscard]] bool           orthochronous() const { return lambda_(0, 0) > 0.0; }

    [[nodiscard]] PoincareElement operator*(const PoincareElement &o) const;
    [[nodiscard]] PoincareElement inverse() const;
    [[nodiscard]] RVector         apply(const RVector &x) const { return lambda_ * x + a_; }
    [[nodiscard]] double          metric_residual() const;
    [[nodiscard]] double          distance(const PoincareElement &o) const;
};

class Wedge {
    PoincareElement g_;

    public:
    Wedge() = default;
    explicit Wedge(PoincareElement g) : g_(std::move(g)) {}
    static Wedge standard(Eigen::Index d) { return Wedge(PoincareElement::identity(d)); }
    static Wedge standard_complement(Eigen::Index d) { return Wedge(PoincareElement::reflection(d)); }

    [[nodiscard]] Eigen::Index           d() const { return g_.d(); }
    [[nodiscard]] const PoincareElement &g() const { return g_; }
    [[nodiscard]] const RVector         &apex() const { return g_.a(); }

    // W = {x : <x-a, n0> > 0, <x-a, n1> > 0}, n0 = L(1,-1,0..), n1 = -L(1,1,0..), scaled to |time component| = 1
    [[nodiscard]] RVector normal(int which) const;
    // null boundary rays r1 = L(1,1,0..), r2 = L(-1,1,0..) and edge directions
    [[nodiscard]] RVector ray(int which) const;
    [[nodiscard]] RMatrix edge() const;

    [[nodiscard]] bool contains(const RVector &x, double tol = 0.0) const;

    [[nodiscard]] PoincareElement boost(double t) const;
    [[nodiscard]] PoincareElement reflection() const;
    [[nodiscard]] Wedge           translated(const RVector &a) const;

    // d = 2 only: right (orthochronous representative) or left wedge, lightlike apex coordinates
    [[nodiscard]] bool   right() const { return g_.orthochronous(); }
    [[nodiscard]] double apex_u() const { return g_.a()[0] + g_.a()[1]; }
    [[nodiscard]] double apex_v() const { return g_.a()[0] - g_.a()[1]; }
};

Wedge transform_wedge(const PoincareElement &g, const Wedge &w);
Wedge causal_complement(const Wedge &w);
bool  wedge_equal(const Wedge &w1, const Wedge &w2, double tol = 1e-10);

struct InclusionResult {
    bool                   included = false;
    bool                   exact    = true; // false: numerical generator test (d >= 3)
    std::optional<RVector> witness;         // point of the inner wedge outside the outer one
};
InclusionResult wedge_inclusion(const Wedge &inner, const Wedge &outer, double tol = 1e-9);

struct InclusionError : Error {
    std::optional<RVector> witness;
    InclusionError(const std::string &msg, std::optional<RVector> w) : Error(msg), witness(std::move(w)) {}
};

struct InclusionStep {
    RVector h;              // null generator
    double  a0        = 0;  // parameter >= 0
    int     direction = +1; // +1 future-pointing, -1 past-pointing
    double  boost_residual      = 0; // |L_W(t) h - e^{-+2 pi t} h| at a sample t
    double  reflection_residual = 0; // |R_W h + h|
};

struct PositiveInclusionCert {
    std::vector<InclusionStep> steps;
    Wedge                      outer;
    Wedge                      inner;
};
PositiveInclusionCert positive_inclusion_chain(const Wedge &inner, const Wedge &outer, double tol = 1e-9);
Wedge                 apply_certificate(const PositiveInclusionCert &cert);

enum class RegionKind { wedge, double_cone, spacelike_cone, lightlike_strip, general_intersection };
std::string to_string(RegionKind k);

struct Region {
    RegionKind             kind = RegionKind::wedge;
    std::vector<Wedge>     wedges;
    std::optional<RVector> strip_a;

    static Region wedge(const Wedge &w);
    // (W1 + a) meet (W1' + b) in d = 2
    static Region double_cone_2d(const RVector &a, const RVector &b);
    // closure(W) meet (closure(W') + a), a lightlike with W + a inside W
    static Region lightlike_strip(const Wedge &w, const RVector &a);
    // apex + causal completion of a simplicial spatial cone spanned by the columns of gens (d = 4)
    static Region spacelike_cone(const RVector &apex, const Eigen::Matrix3d &gens);
    static Region general_intersection(std::vector<Wedge> ws);

    [[nodiscard]] Eigen::Index d() const { return wedges.empty() ? 0 : wedges.front().d(); }
    [[nodiscard]] bool         contains(const RVector &x) const;
    [[nodiscard]] std::string  canonical_key() const;
};

struct CoveringFamily {
    std::vector<Wedge> wedges;
    bool               exact = true;
};
CoveringFamily covering_family(const Region &r);

// wedge W with r1 inside W and r2 inside W'
std::optional<Wedge> separating_wedge(const Region &r1, const Region &r2);

nlohmann::json to_json(const PoincareElement &g);
nlohmann::json to_json(const Wedge &w);
nlohmann::json to_json(const PositiveInclusionCert &c);
nlohmann::json to_json(const Region &r);

} // namespace modloc
