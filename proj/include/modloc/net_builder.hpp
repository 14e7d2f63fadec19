#pragma once

#include "modloc/representations.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

namespace modloc {

inline constexpr const char *library_version = "modloc 1.0.0";

nlohmann::json to_json(const Tolerances &t);
Tolerances     tolerances_from_json(const nlohmann::json &j, Tolerances defaults = {});

// intersection of hemisphere diamonds
struct SphereRegion {
    std::vector<SphereWedge> wedges;
};

using NetRegion = std::variant<Region, SphereRegion>;
std::string    canonical_key(const NetRegion &r);
nlohmann::json to_json(const NetRegion &r);

struct ProvenanceEntry {
    std::string              key;
    std::string              method; // "direct" | "meet"
    std::vector<std::string> family; // canonical keys of the wedges used
    bool                     exact_family = true;
};

struct IsotonyEntry {
    std::string inner, outer;
    double      residual = 0.0; // max distance of an orthonormal basis of K_inner from K_outer
    bool        holds    = true;
};

struct LocalityResult {
    bool   separated = false; // a separating wedge was found
    double residual  = 0.0;   // max distance of K_1 basis vectors from (K_2)'
    bool   holds     = true;
};

class LocalNet {
    BuiltModel model_;
    Tolerances tol_;

    mutable std::shared_mutex                   mu_;
    mutable std::map<std::string, RealSubspace> cache_;
    mutable std::map<std::string, ProvenanceEntry> provenance_;
    std::vector<std::pair<NetRegion, NetRegion>> inclusions_;
    std::vector<IsotonyEntry>                    isotony_;

    RealSubspace compute(const NetRegion &r, ProvenanceEntry &prov) const;

    public:
    LocalNet(BuiltModel model, Tolerances tol = {}) : model_(std::move(model)), tol_(tol) {}

    [[nodiscard]] const BuiltModel &model() const { return model_; }
    [[nodiscard]] const Tolerances &tolerances() const { return tol_; }

    // safe for concurrent callers; concurrent misses recompute the same value
    [[nodiscard]] RealSubspace local_space(const NetRegion &r) const;
    [[nodiscard]] RealSubspace wedge_space(const Wedge &w) const { return local_space(Region::wedge(w)); }
    [[nodiscard]] RealSubspace wedge_space(const SphereWedge &w) const { return local_space(SphereRegion{{w}}); }
    [[nodiscard]] std::size_t  cache_size() const;

    // |meet over the minimal family - direct wedge construction|, for wedge regions
    [[nodiscard]] double wedge_consistency(const Wedge &w) const;

    // records inner ⊂ outer and checks K_inner ⊂ K_outer
    IsotonyEntry record_inclusion(const NetRegion &inner, const NetRegion &outer);
    [[nodiscard]] const std::vector<IsotonyEntry> &isotony_ledger() const { return isotony_; }
    // drops cached spaces and re-verifies every recorded inclusion
    void set_tolerances(const Tolerances &tol);

    [[nodiscard]] LocalityResult locality(const NetRegion &r1, const NetRegion &r2) const;
    [[nodiscard]] nlohmann::json provenance() const;
};

struct NetReportConfig {
    double duality_threshold     = 1e-9;
    double covariance_threshold  = 1e-9;
    double consistency_threshold = 1e-9;
    double bw_threshold          = 1e-3;
    double haag_threshold        = 1e-9;
    int    covariance_samples    = 8;
    std::uint64_t    seed        = 1;
    BumpFamilySpec   bumps;
    std::vector<int> trend_N{32, 64, 128};
    RVector          dc_a = (RVector(2) << 0.0, -1.0).finished(); // double cone (W1 + a) meet (W1' + b)
    RVector          dc_b = (RVector(2) << 0.0, 1.0).finished();
};
NetReportConfig net_report_config_from_json(const nlohmann::json &j, NetReportConfig defaults = {});
nlohmann::json  to_json(const NetReportConfig &c);

struct Check {
    std::string    name;
    std::string    paper_ref; // property being checked
    std::optional<double> residual;
    nlohmann::json dims;      // dimension data, null when absent
    double         threshold = 0.0;
    std::string    status;    // pass | fail | info
    bool           strict_ok = true; // verdict of an info-level probe when treated as a gate
    nlohmann::json detail;
};
nlohmann::json to_json(const Check &c);
// pass-gated failures, plus info probes with strict_ok = false under strict
bool check_failed(const Check &c, bool strict);

struct NetReport {
    std::vector<Check> checks;
    nlohmann::json     provenance;
};
NetReport      net_report(LocalNet &net, const NetReportConfig &cfg = {});
nlohmann::json to_json(const NetReport &r, const LocalNet &net, std::uint64_t seed);

// double-cone Haag duality data at one compression size
struct HaagResult {
    double       residual = 0.0; // distance between K_{O'} and (K_O)'
    Eigen::Index k_o_dim = 0, k_o_prime_dim = 0, complement_dim = 0;
};
HaagResult haag_duality(const LocalNet &net, const RVector &a, const RVector &b);

// min |lambda - 1| over the spectrum of Delta_W, and the dimension of the lambda = 1 eigenspace
struct SpectralGap {
    double       min_gap = 0.0;
    Eigen::Index unit_eigenspace_dim = 0;
};
SpectralGap spectral_gap(const ModularData &m, double tol = 1e-8);

} // namespace modloc
