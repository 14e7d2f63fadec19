#include "modloc/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string                  config;
    std::string                  out = ".";
    std::optional<std::uint64_t> seed;
    int                          jobs   = 1;
    bool                         strict = false;
    std::string                  file;
};

void write_file(const fs::path &p, const std::string &content) {
    std::ofstream os(p, std::ios::binary);
    if(!os) throw modloc::Error("cannot write '" + p.string() + "'");
    os << content;
}

modloc::ExperimentConfig load(const Options &o) {
    auto cfg = modloc::load_config(o.config);
    if(o.seed) cfg.seed = *o.seed;
    return cfg;
}

int execute(const Options &o, bool sweeps_only) {
    auto cfg = load(o);
    auto out = modloc::run_config(cfg, o.jobs, o.strict, sweeps_only);
    fs::create_directories(o.out);
    write_file(fs::path(o.out) / cfg.report_file, out.report.dump(2) + "\n");
    for(const auto &t : out.tables) write_file(fs::path(o.out) / t.name, t.content);
    std::cout << modloc::format_report(out.report);
    return out.exit_code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"modular localization experiments"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App *s, bool need_config) {
        auto *c = s->add_option("--config", o.config, "experiment config (JSON)")->check(CLI::ExistingFile);
        if(need_config) c->required();
        s->add_option("--out", o.out, "output directory");
        s->add_option("--seed", o.seed, "overrides the config seed");
        s->add_option("--jobs", o.jobs, "parallel experiments")->check(CLI::PositiveNumber);
        s->add_flag("--strict", o.strict, "treat info-level probes as gates");
    };
    auto *validate = app.add_subcommand("validate", "check a config without running it");
    common(validate, true);
    auto *run = app.add_subcommand("run", "run every experiment and write the report");
    common(run, true);
    auto *sweep = app.add_subcommand("sweep", "run only the experiments with a sweep axis");
    common(sweep, true);
    auto *report = app.add_subcommand("report", "pretty-print a JSON report");
    common(report, false);
    report->add_option("--file", o.file, "report file; defaults to the config's report path under --out");

    CLI11_PARSE(app, argc, argv);

    try {
        if(*validate) {
            load(o);
            std::cout << "config ok\n";
            return 0;
        }
        if(*run) return execute(o, false);
        if(*sweep) return execute(o, true);
        fs::path path = o.file;
        if(path.empty()) {
            if(o.config.empty()) throw modloc::Error("report needs --file or --config");
            path = fs::path(o.out) / modloc::load_config(o.config).report_file;
        }
        std::ifstream in(path);
        if(!in) throw modloc::Error("cannot open report '" + path.string() + "'");
        nlohmann::json j;
        in >> j;
        std::cout << modloc::format_report(j);
        return 0;
    } catch(const modloc::ConfigError &e) {
        for(const auto &d : e.diagnostics) std::cerr << "config error: " << d << "\n";
        return 1;
    } catch(const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
