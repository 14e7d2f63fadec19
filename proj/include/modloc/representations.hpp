#pragma once

#include "modloc/standard_subspace.hpp"
#include "modloc/wedge_geometry.hpp"

#include <Eigen/Geometry>
#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace modloc {

struct ModelSpec {
    std::string variant = "rapidity"; // rapidity | sphere | trivial
    double      m       = 1.0;
    int         N       = 16;
    double      sigma   = 1.0;
    int         j       = 1;
    double      E       = 1.0;
};
ModelSpec      model_spec_from_json(const nlohmann::json &j);
nlohmann::json to_json(const ModelSpec &s);

struct ValidationEntry {
    std::string identity;
    double      residual  = 0.0;
    double      threshold = 0.0;
    bool        exact     = false; // residual is bitwise zero
};
struct ValidationReport {
    std::vector<ValidationEntry> entries;
};
nlohmann::json to_json(const ValidationReport &r);

// Massive scalar in d = 2, rapidity space, compressed to the first N Hermite functions of scale sigma.
class RapidityModel {
    double                m_ = 1.0, sigma_ = 1.0;
    int                   n_ = 0;
    RMatrix               d_;
    RVector               theta_;       // quadrature nodes in rapidity
    RMatrix               rho_;         // N x Q, Hermite functions times square-root weights
    RVector               log_sqrt_w_;  // log of square-root Christoffel weights
    DenseOperator         h_;           // boost generator
    SpectralDecomposition h_spec_;

    public:
    RapidityModel() = default;
    RapidityModel(double m, int n, double sigma);

    [[nodiscard]] double                       m() const { return m_; }
    [[nodiscard]] int                          N() const { return n_; }
    [[nodiscard]] double                       sigma() const { return sigma_; }
    [[nodiscard]] const RMatrix               &D() const { return d_; }
    [[nodiscard]] const DenseOperator         &boost_generator() const { return h_; }
    [[nodiscard]] const SpectralDecomposition &boost_spectrum() const { return h_spec_; }
    [[nodiscard]] const RVector               &nodes() const { return theta_; }

    // Galerkin matrix of a real function of theta, exactly symmetric
    [[nodiscard]] RMatrix       galerkin(const std::function<double(double)> &f) const;
    [[nodiscard]] RMatrix       translation_generator(const RVector &a) const;
    [[nodiscard]] DenseOperator translation(const RVector &a) const;
    [[nodiscard]] DenseOperator boost(double t) const;
    // coefficients of psi(theta) given as exp(log_envelope(theta)) * phase(theta)
    [[nodiscard]] CVector project(const std::function<double(double)> &log_envelope, const std::function<cplx(double)> &phase) const;
    // largest rapidity resolved by the quadrature grid
    [[nodiscard]] double theta_max() const { return theta_.size() ? theta_.cwiseAbs().maxCoeff() : 0.0; }
};

// U(r, t) = e^{iEt} D^j(r) on C^{2j+1}, basis m = j, ..., -j
class SphereToyModel {
    int           j_ = 1;
    double        e_ = 1.0;
    DenseOperator lx_, ly_, lz_;
    AntilinearOperator jt_;

    public:
    SphereToyModel() = default;
    SphereToyModel(int j, double energy);

    [[nodiscard]] int                       j() const { return j_; }
    [[nodiscard]] double                    E() const { return e_; }
    [[nodiscard]] Eigen::Index              dim() const { return 2 * j_ + 1; }
    [[nodiscard]] const DenseOperator      &Lx() const { return lx_; }
    [[nodiscard]] const DenseOperator      &Ly() const { return ly_; }
    [[nodiscard]] const DenseOperator      &Lz() const { return lz_; }
    [[nodiscard]] const AntilinearOperator &J() const { return jt_; }
    [[nodiscard]] DenseOperator             rotation(const Eigen::Matrix3d &r) const;
};

// one-dimensional control with U = 1, J = C
struct TrivialModel {};

using Model = std::variant<RapidityModel, SphereToyModel, TrivialModel>;

struct BuiltModel {
    ModelSpec        spec;
    Model            model;
    ValidationReport report;
};
BuiltModel build_model(const ModelSpec &spec, const Tolerances &tol = {});
Eigen::Index model_dim(const Model &m);

struct SphereGroupElement {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    double          time     = 0.0;
    bool            pt       = false;

    [[nodiscard]] SphereGroupElement operator*(const SphereGroupElement &o) const;
    [[nodiscard]] SphereGroupElement inverse() const;
};
Eigen::Matrix3d sphere_rho();

using GroupElement = std::variant<PoincareElement, SphereGroupElement>;

// x -> matrix * x, or matrix * conj(x) when antilinear
struct ModelOperator {
    DenseOperator matrix;
    bool          antilinear = false;

    [[nodiscard]] CVector            apply(const CVector &x) const { return antilinear ? CVector(matrix * x.conjugate()) : CVector(matrix * x); }
    [[nodiscard]] ModelOperator      operator*(const ModelOperator &o) const;
    [[nodiscard]] ModelOperator      inverse() const;
    [[nodiscard]] RealSubspace       image(const RealSubspace &k) const;
    // A L A^{-1} for a linear L
    [[nodiscard]] DenseOperator      conjugate(const DenseOperator &l) const;
    [[nodiscard]] AntilinearOperator conjugate(const AntilinearOperator &s) const;
};
double operator_distance(const ModelOperator &a, const ModelOperator &b);

ModelOperator group_operator(const Model &model, const GroupElement &g);

// hemisphere diamond at time t with pole n; W0 has pole +z at t = 0
struct SphereWedge {
    Eigen::Vector3d pole = Eigen::Vector3d::UnitZ();
    double          time = 0.0;

    [[nodiscard]] SphereGroupElement representative() const;
    [[nodiscard]] SphereWedge        complement() const { return {-pole, time}; }
};
std::vector<SphereWedge> coordinate_hemispheres();

ModularData wedge_modular_data(const Model &model, const Wedge &w, const Tolerances &tol = {});
ModularData wedge_modular_data(const Model &model, const SphereWedge &w, const Tolerances &tol = {});

struct Bump {
    double amplitude = 1.0;
    double c0 = 0.0, c1 = 0.0;
    double width = 1.0;
};
// psi_f(theta) = f^(m cosh theta, m sinh theta), f^(p) = int e^{i(p0 x0 - p1 x1)} f(x) d^2x
CVector mass_shell_embedding(const RapidityModel &model, const std::vector<Bump> &f);

// uniform [0,1) from the standard 64-bit Mersenne twister; the engine sequence is fixed by the standard
class Uniform01 {
    std::mt19937_64 eng_;

    public:
    explicit Uniform01(std::uint64_t seed) : eng_(seed) {}
    double operator()() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
};

struct BumpFamilySpec {
    int           count     = 20;
    double        width_min = 0.5; // Gaussian widths, in units of 1/m
    double        width_max = 1.0;
    double        depth_max = 1.0; // extra lightlike depth beyond the 6-width margin
    std::uint64_t seed      = 1;
};
nlohmann::json to_json(const BumpFamilySpec &s);
BumpFamilySpec bump_family_from_json(const nlohmann::json &j, BumpFamilySpec defaults = {});

// single bumps whose 6-width Euclidean neighbourhood lies in the d = 2 wedge w
std::vector<Bump> sample_bumps_in_wedge(const Wedge &w, const BumpFamilySpec &spec);
double            bump_margin(const Wedge &w, const Bump &b); // distance to the boundary in widths

struct BwResidual {
    double distance = 0.0; // |psi - P_K psi| / |psi|
    double tomita   = std::numeric_limits<double>::quiet_NaN(); // |S psi - psi| / |psi| when S is representable
};
BwResidual bw_residual(const RealSubspace &k, const CVector &psi, const std::optional<AntilinearOperator> &tomita = std::nullopt);

enum class IsotonyMode { plain, twisted };
std::string to_string(IsotonyMode m);

struct IsotonyReport {
    double residual            = 0.0; // max over the family generators k of |U(a) k - P U(a) k| / |U(a) k|
    int    family_real_dim     = 0;
    double subspace_sine       = 0.0; // max principal sine of U(a) K vs K, full compressed subspaces
    double reflection_residual = 0.0; // |J U(a) J - U(-a)|
    double dilation_residual   = 0.0; // |D^{it} U(a) D^{-it} - U(L_W(t) a)| at t = 0.05
    double positivity_min_eig  = 0.0; // smallest eigenvalue over the lightlike generators
    double twist_literal_involution_residual = std::numeric_limits<double>::quiet_NaN();
    double twist_involution_residual         = std::numeric_limits<double>::quiet_NaN();
    double resolution_parameter              = 0.0;
    bool   resolution_warning                = false;
};
IsotonyReport isotony_probe(const RapidityModel &model, const Wedge &w, const RVector &a, IsotonyMode mode, const BumpFamilySpec &family,
                            double twist_scale = 1.0, const Tolerances &tol = {});
nlohmann::json to_json(const IsotonyReport &r);

// square root of the twist V = exp(2i atan(sech(h / scale))) on log Delta = h; V is J-even, so VJ is again a conjugation
DenseOperator twist_half(const ModularData &m, double scale = 1.0);

struct StripReport {
    bool               degenerate  = false;
    bool               strip_empty = false; // W1 + a not inside W1
    Eigen::Index       meet_real_dim = 0;
    StandardnessReport verdict;
    std::optional<int> fixed_space_real_dim;
    std::string        fixed_space_note;
    double             min_principal_sine = 1.0;
    int                sines_below_1e3    = 0;
};
StripReport    strip_standardness_probe(const RapidityModel &model, const RVector &a, const Tolerances &tol = {});
nlohmann::json to_json(const StripReport &r);

class DoubledRepresentation {
    std::function<DenseOperator(const GroupElement &)> u_;
    AntilinearOperator                                 c_;
    std::function<GroupElement(const GroupElement &)>  reflect_;

    public:
    DoubledRepresentation(std::function<DenseOperator(const GroupElement &)> u, AntilinearOperator c,
                          std::function<GroupElement(const GroupElement &)> reflect)
        : u_(std::move(u)), c_(std::move(c)), reflect_(std::move(reflect)) {}

    [[nodiscard]] Eigen::Index  dim() const { return 2 * c_.dim(); }
    [[nodiscard]] ModelOperator operator()(const GroupElement &g) const; // orientation-preserving g
    [[nodiscard]] ModelOperator reflection() const;
    [[nodiscard]] GroupElement  reflect(const GroupElement &g) const { return reflect_(g); }
};
DoubledRepresentation pct_double(std::function<DenseOperator(const GroupElement &)> u, const AntilinearOperator &c,
                                 std::function<GroupElement(const GroupElement &)> reflect, const Tolerances &tol = {});

} // namespace modloc
