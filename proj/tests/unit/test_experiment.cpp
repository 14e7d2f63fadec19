#include "modloc/experiment.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace modloc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int cli(const std::string &args) {
    const char *exe = std::getenv("MODLOC_CLI");
    REQUIRE(exe != nullptr);
    int rc = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

fs::path write_config(const std::string &name, const json &j) {
    fs::path dir = fs::temp_directory_path() / "modloc_test_experiment";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

} // namespace

TEST_CASE("empty experiment list") {
    json cfg{{"schema_version", 1}, {"experiments", json::array()}};
    auto out = run_config(parse_config(cfg));
    CHECK(out.exit_code == 0);
    CHECK(out.report["checks"].empty());
    CHECK(out.report["summary"]["checks"] == 0);
}

TEST_CASE("unknown probe is rejected by name") {
    json cfg{{"schema_version", 1}, {"experiments", {{{"probe", "frobnicate"}}}}};
    auto d = validate_config(cfg);
    REQUIRE(d.size() == 1);
    CHECK(d[0].find("frobnicate") != std::string::npos);
    CHECK_THROWS_AS(parse_config(cfg), ConfigError);
}

TEST_CASE("schema diagnostics") {
    CHECK_FALSE(validate_config(json::array()).empty());
    CHECK_FALSE(validate_config(json{{"experiments", json::array()}}).empty());
    json bad{{"schema_version", 1}, {"model", {{"variant", "rapidity"}, {"N", -3}}}, {"experiments", json::array()}, {"typo", 1}};
    CHECK(validate_config(bad).size() == 2);
    CHECK(validate_config(json{{"schema_version", 1}, {"experiments", json::array()}, {"seed", 3}}).empty());
    CHECK(validate_config(json{{"schema_version", 1}, {"experiments", json::array()}, {"seed", -3}}).size() == 1);
    json combo{{"schema_version", 1}, {"model", {{"variant", "sphere"}}}, {"experiments", {{{"probe", "bw"}}}}};
    auto d = validate_config(combo);
    REQUIRE(d.size() == 1);
    CHECK(d[0].find("'bw'") != std::string::npos);
    CHECK(d[0].find("'sphere'") != std::string::npos);
}

TEST_CASE("sweeps produce CSV tables in order") {
    json cfg{{"schema_version", 1},
             {"experiments", {{{"probe", "round_trip"}, {"params", {{"samples", 4}}}, {"sweep", {{"param", "n_max"}, {"values", {2, 3}}}}}}}};
    auto out = run_config(parse_config(cfg), 2);
    REQUIRE(out.tables.size() == 1);
    CHECK(out.tables[0].name == "sweep_0_round_trip.csv");
    CHECK(out.tables[0].content.rfind("n_max,check,residual,status\n", 0) == 0);
    CHECK(out.report["experiments"][0]["runs"].size() == 2);
    CHECK(out.report["experiments"][0]["runs"][0]["sweep_value"] == 2);
}

TEST_CASE("parallel and serial runs agree") {
    json cfg{{"schema_version", 1},
             {"experiments", {{{"probe", "round_trip"}, {"params", {{"samples", 6}}}}, {{"probe", "sphere"}, {"params", {{"j", json::array({1})}}}}}}};
    auto c = parse_config(cfg);
    CHECK(run_config(c, 1).report.dump() == run_config(c, 3).report.dump());
}

TEST_CASE("command line exit codes and byte-identical reruns") {
    fs::path empty = write_config("empty.json", {{"schema_version", 1}, {"experiments", json::array()}});
    fs::path out   = empty.parent_path();
    CHECK(cli("validate --config " + empty.string()) == 0);
    CHECK(cli("run --config " + empty.string() + " --out " + (out / "a").string()) == 0);

    fs::path unknown = write_config("unknown.json", {{"schema_version", 1}, {"experiments", {{{"probe", "frobnicate"}}}}});
    CHECK(cli("run --config " + unknown.string() + " --out " + (out / "b").string()) == 1);

    fs::path small = write_config("small.json", {{"schema_version", 1}, {"seed", 5}, {"experiments", {{{"probe", "round_trip"}, {"params", {{"samples", 5}}}}}}});
    CHECK(cli("run --config " + small.string() + " --out " + (out / "c1").string()) == 0);
    CHECK(cli("run --config " + small.string() + " --out " + (out / "c2").string() + " --jobs 2") == 0);
    CHECK(slurp(out / "c1" / "report.json") == slurp(out / "c2" / "report.json"));
    CHECK(cli("report --file " + (out / "c1" / "report.json").string()) == 0);

    fs::path failing = write_config("failing.json", {{"schema_version", 1},
                                                     {"experiments", {{{"probe", "round_trip"}, {"params", {{"samples", 2}, {"threshold", 1e-300}}}}}}});
    CHECK(cli("run --config " + failing.string() + " --out " + (out / "d").string()) == 2);
}
