// Experiment runner for sequential social learning under planner
// interventions: `run` a declarative config, `verify` the analytical
// property suite, `sweep` a parameter, `report` a frontier table.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqlearn/config.hpp"
#include "seqlearn/lemma_lab.hpp"
#include "seqlearn/runner.hpp"

namespace {

seqlearn::ExperimentConfig load_config(const std::string& path,
                                       std::optional<std::uint64_t> seed) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot read config file: " + path);
    }
    nlohmann::json j;
    f >> j;
    seqlearn::ExperimentConfig cfg = seqlearn::config_from_json(j);
    if (seed) cfg.seed = *seed;
    return cfg;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

int run_verify(bool as_json) {
    const auto results = seqlearn::run_lemma_suite();
    bool all_pass = true;
    if (as_json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& res : results) {
            arr.push_back({{"name", res.name},
                           {"status", res.pass ? "pass" : "fail"},
                           {"observed", res.observed},
                           {"bound", res.bound},
                           {"tolerance", res.tolerance},
                           {"samples", res.samples},
                           {"details", res.details}});
            all_pass = all_pass && res.pass;
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        std::cout << std::left << std::setw(34) << "check" << std::setw(8)
                  << "status" << std::setw(16) << "observed" << std::setw(16)
                  << "bound" << std::setw(12) << "tolerance" << "samples\n";
        for (const auto& res : results) {
            std::cout << std::left << std::setw(34) << res.name << std::setw(8)
                      << (res.pass ? "pass" : "FAIL") << std::setw(16)
                      << res.observed << std::setw(16) << res.bound
                      << std::setw(12) << res.tolerance << res.samples;
            if (!res.details.empty()) std::cout << "  " << res.details;
            std::cout << "\n";
            all_pass = all_pass && res.pass;
        }
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential social learning laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string results_dir;
    std::string param_spec;
    std::optional<std::uint64_t> seed_override;
    bool json_output = false;

    auto* run_cmd = app.add_subcommand("run", "run one experiment config");
    run_cmd->add_option("config", config_path, "config JSON file")->required();
    run_cmd->add_option("--seed", seed_override, "override the master seed");

    auto* verify_cmd =
        app.add_subcommand("verify", "run the analytical property suite");
    verify_cmd->add_flag("--json", json_output, "machine-readable output");

    auto* sweep_cmd =
        app.add_subcommand("sweep", "run a config over a parameter list");
    sweep_cmd->add_option("config", config_path, "config JSON file")
        ->required();
    sweep_cmd
        ->add_option("--param", param_spec,
                     "key=v1,v2,... (key in config-path form, e.g. "
                     "distribution.alpha)")
        ->required();
    sweep_cmd->add_option("--seed", seed_override, "override the master seed");

    auto* report_cmd =
        app.add_subcommand("report", "emit the mistakes-vs-transfers frontier");
    report_cmd->add_option("results", results_dir, "results directory")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto cfg = load_config(config_path, seed_override);
            const auto result = seqlearn::run_experiment(cfg);
            std::cout << result.summary.dump(2) << "\n";
            std::cout << "wrote " << result.output_dir.string() << "\n";
            return 0;
        }
        if (verify_cmd->parsed()) {
            return run_verify(json_output);
        }
        if (sweep_cmd->parsed()) {
            const auto eq = param_spec.find('=');
            if (eq == std::string::npos) {
                throw std::runtime_error("--param expects key=v1,v2,...");
            }
            const std::string key = param_spec.substr(0, eq);
            const auto values = split_csv(param_spec.substr(eq + 1));
            auto cfg = load_config(config_path, seed_override);
            const auto results = seqlearn::run_sweep(cfg, key, values);
            const std::string frontier = seqlearn::report_frontier(cfg.output);
            std::ofstream f(std::filesystem::path(cfg.output) /
                            "frontier.csv");
            f << frontier;
            std::cout << frontier;
            return 0;
        }
        if (report_cmd->parsed()) {
            const std::string frontier = seqlearn::report_frontier(results_dir);
            std::ofstream f(std::filesystem::path(results_dir) /
                            "frontier.csv");
            f << frontier;
            std::cout << frontier;
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
