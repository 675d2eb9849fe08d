#pragma once

// `run`: execute a configuration and persist results.csv and manifest.json.

#include "silt/experiment/config.hpp"
#include "silt/experiment/manifest.hpp"
#include "silt/experiment/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

namespace silt::experiment {

struct RunRecord {
    Outcome outcome;
    std::filesystem::path directory;
    std::filesystem::path manifest;
};

inline RunRecord run_and_write(const ExperimentConfig& config, const std::filesystem::path& directory) {
    const auto started = std::chrono::system_clock::now();
    RunRecord rec{run_experiment(config), directory, directory / "manifest.json"};
    const auto finished = std::chrono::system_clock::now();

    std::filesystem::create_directories(directory);
    rec.outcome.table.write((directory / "results.csv").string());
    ManifestInput mi{&config, rec.outcome.checks, rec.outcome.summary, started, finished, "results.csv"};
    std::ofstream out(rec.manifest);
    if (!out) throw InputError("cannot write '" + rec.manifest.string() + "'");
    out << build_manifest(mi).dump(2) << "\n";
    return rec;
}

}  // namespace silt::experiment
