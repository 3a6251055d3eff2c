#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqlearn/config.hpp"
#include "seqlearn/engine_exact.hpp"
#include "seqlearn/engine_mc.hpp"
#include "seqlearn/lemma_lab.hpp"
#include "seqlearn/metrics.hpp"

namespace seqlearn {

inline constexpr const char* kVersion = "0.1.0";

// 17 significant digits round-trip doubles exactly, so the CSV is
// byte-identical across runs and platforms with IEEE doubles.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void write_metrics_csv(const std::filesystem::path& path,
                              const std::vector<PeriodMetrics>& series) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << metrics_csv_header() << "\n";
    for (const auto& m : series) {
        out << m.t << ',' << format_double(m.p_mistake_agent) << ','
            << format_double(m.p_mistake_planner) << ','
            << format_double(m.p_mistake_presignal) << ','
            << format_double(m.e_abs_llr) << ','
            << format_double(m.e_abs_transfer) << ','
            << format_double(m.cum_mistakes) << ','
            << format_double(m.cum_transfers) << "\n";
    }
}

struct RunResult {
    std::vector<PeriodMetrics> series;
    nlohmann::json summary;
    std::filesystem::path output_dir;
};

// Runs one experiment and writes metrics.csv, config.json (the resolved
// config plus version) and summary.json into the config's output directory.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    RunResult out;
    double leakage = 0.0;
    std::size_t floor_events = 0;
    if (cfg.engine.kind == EngineKind::Exact) {
        ExactResult result =
            std::holds_alternative<LastKDisclosure>(cfg.disclosure)
                ? lastk_evolve(cfg)
                : exact_evolve(cfg);
        out.series = std::move(result.series);
        leakage = result.leakage;
        floor_events = result.floor_events;
    } else {
        McSeries result = mc_aggregate(cfg);
        out.series = std::move(result.series);
    }

    nlohmann::json summary;
    summary["version"] = kVersion;
    summary["seed"] = cfg.seed;
    summary["horizon"] = cfg.engine.horizon;
    summary["cum_mistakes"] = out.series.back().cum_mistakes;
    summary["cum_transfers"] = out.series.back().cum_transfers;
    summary["clamp_leakage"] = leakage;
    summary["cutoff_floor_events"] = floor_events;
    if (out.series.size() >= 100) {
        const EfficiencyReport report = efficiency_diagnostics(out.series);
        summary["efficiency"] = {
            {"classification", convergence_name(report.classification)},
            {"tail_increment", report.tail_increment},
            {"loglog_slope", report.slope},
            {"loglog_slope_stderr", report.slope_stderr}};
    } else {
        summary["efficiency"] = nullptr;
    }
    out.summary = summary;

    out.output_dir = cfg.output;
    std::filesystem::create_directories(out.output_dir);
    write_metrics_csv(out.output_dir / "metrics.csv", out.series);
    {
        nlohmann::json sidecar = to_json(cfg);
        sidecar["version"] = kVersion;
        std::ofstream f(out.output_dir / "config.json");
        f << sidecar.dump(2) << "\n";
    }
    {
        std::ofstream f(out.output_dir / "summary.json");
        f << summary.dump(2) << "\n";
    }
    return out;
}

// --------------------------------- sweep -----------------------------------

// Applies `--param key=v1,v2,...` by patching the config JSON at the slash
// or dot separated key, running each variant into its own subdirectory.
inline std::vector<RunResult> run_sweep(const ExperimentConfig& base,
                                        const std::string& key,
                                        const std::vector<std::string>& values) {
    std::string pointer = "/" + key;
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    std::vector<RunResult> results;
    for (const auto& value : values) {
        nlohmann::json j = to_json(base);
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(value);
        } catch (const nlohmann::json::parse_error&) {
            parsed = value;  // plain string
        }
        j[nlohmann::json::json_pointer(pointer)] = parsed;
        ExperimentConfig cfg = config_from_json(j);
        cfg.output = (std::filesystem::path(base.output) / (key + "=" + value))
                         .string();
        results.push_back(run_experiment(cfg));
    }
    return results;
}

// --------------------------------- report ----------------------------------

// Scans a results directory for summary.json files and emits the
// mistakes-vs-transfers frontier, ordered by cumulative transfers.
inline std::string report_frontier(const std::filesystem::path& results_dir) {
    struct Row {
        std::string name;
        double cum_transfers = 0.0;
        double cum_mistakes = 0.0;
        std::string classification;
    };
    std::vector<Row> rows;
    if (!std::filesystem::exists(results_dir)) {
        throw std::runtime_error("report: no such directory: " +
                                 results_dir.string());
    }
    auto load = [&](const std::filesystem::path& summary_path,
                    const std::string& name) {
        std::ifstream f(summary_path);
        nlohmann::json j;
        f >> j;
        Row row;
        row.name = name;
        row.cum_transfers = j.at("cum_transfers").get<double>();
        row.cum_mistakes = j.at("cum_mistakes").get<double>();
        if (j.contains("efficiency") && !j.at("efficiency").is_null()) {
            row.classification =
                j.at("efficiency").at("classification").get<std::string>();
        }
        rows.push_back(row);
    };
    if (std::filesystem::exists(results_dir / "summary.json")) {
        load(results_dir / "summary.json", results_dir.filename().string());
    }
    for (const auto& entry :
         std::filesystem::directory_iterator(results_dir)) {
        if (!entry.is_directory()) continue;
        const auto summary_path = entry.path() / "summary.json";
        if (std::filesystem::exists(summary_path)) {
            load(summary_path, entry.path().filename().string());
        }
    }
    if (rows.empty()) {
        throw std::runtime_error("report: no summary.json found under " +
                                 results_dir.string());
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.cum_transfers < b.cum_transfers;
    });
    std::ostringstream out;
    out << "name,cum_transfers,cum_mistakes,classification\n";
    for (const auto& row : rows) {
        out << row.name << ',' << format_double(row.cum_transfers) << ','
            << format_double(row.cum_mistakes) << ',' << row.classification
            << "\n";
    }
    return out.str();
}

}  // namespace seqlearn
