#pragma once

#include "modloc/fock.hpp"
#include "modloc/net_builder.hpp"

#include <string>
#include <vector>

namespace modloc {

inline constexpr int schema_version = 1;

struct ConfigError : Error {
    std::vector<std::string> diagnostics;
    explicit ConfigError(std::vector<std::string> d);
};

struct SweepAxis {
    std::string                 param;
    std::vector<nlohmann::json> values;
};

struct ExperimentSpec {
    std::string              probe;
    nlohmann::json           params = nlohmann::json::object();
    std::optional<SweepAxis> sweep;
};

struct ExperimentConfig {
    int                         schema_version = modloc::schema_version;
    ModelSpec                   model;
    std::vector<ExperimentSpec> experiments;
    Tolerances                  tolerances;
    std::uint64_t               seed = 1;
    std::string                 report_file = "report.json";
    std::string                 csv_prefix  = "sweep";
};

const std::vector<std::string> &probe_names();

// schema diagnostics; empty when the document is a valid config
std::vector<std::string> validate_config(const nlohmann::json &j);
ExperimentConfig         parse_config(const nlohmann::json &j); // throws ConfigError
ExperimentConfig         load_config(const std::string &path);

// random K = G R^n with G complex, entries uniform in the unit square, condition number at most cond_max
RealSubspace random_standard_subspace(Eigen::Index n, Uniform01 &u, double cond_max = 50.0);

struct ExperimentResult {
    std::vector<Check> checks;
    nlohmann::json     data = nlohmann::json::object(); // probe output beyond checks
};
// one probe run; params already merged with the sweep value
ExperimentResult run_probe(const std::string &probe, const nlohmann::json &params, const ExperimentConfig &cfg);

struct CsvTable {
    std::string name;
    std::string content;
};

struct RunOutput {
    nlohmann::json        report;
    std::vector<CsvTable> tables;
    int                   exit_code = 0; // 0 all gated checks pass, 2 failures
};
// experiments run concurrently on up to jobs threads; the report is assembled in experiment order
RunOutput run_config(const ExperimentConfig &cfg, int jobs = 1, bool strict = false, bool sweeps_only = false);

// one line per check
std::string format_report(const nlohmann::json &report);

} // namespace modloc
