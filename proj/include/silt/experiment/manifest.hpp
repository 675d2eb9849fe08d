#pragma once

// Run manifest (JSON) written next to results.csv.

#include "silt/errors.hpp"
#include "silt/experiment/check.hpp"
#include "silt/experiment/config.hpp"
#include "silt/experiment/csv.hpp"
#include "silt/version.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace silt::experiment {

inline constexpr const char* manifest_format = "silt-manifest";
inline constexpr int manifest_version = 1;

[[nodiscard]] inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

[[nodiscard]] inline nlohmann::json config_echo(const ExperimentConfig& c) {
    return {{"kind", to_string(c.kind)},
            {"seed", c.seed},
            {"output", c.output},
            {"T", c.T},
            {"process", to_string(c.process)},
            {"a", c.a},
            {"b", c.b},
            {"convention", to_string(c.effective_convention())},
            {"eps", c.eps},
            {"grid_n", c.grid_n},
            {"samples", c.samples},
            {"shard_size", c.shard_size},
            {"g", c.g},
            {"x0", c.x0},
            {"dos_T_max", c.dos_T_max},
            {"dos_T_count", c.dos_T_count},
            {"energies", c.energies},
            {"damping_time", c.damping_time},
            {"z_max", c.z_max},
            {"rel_tol", c.rel_tol},
            {"trials", c.trials}};
}

[[nodiscard]] inline nlohmann::json checks_json(const std::vector<CheckResult>& checks) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : checks)
        a.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass},
                     {"detail", c.detail}});
    return a;
}

struct ManifestInput {
    const ExperimentConfig* config = nullptr;
    std::vector<CheckResult> checks;
    nlohmann::json summary = nlohmann::json::object();
    std::chrono::system_clock::time_point started, finished;
    std::string results_file = "results.csv";
};

[[nodiscard]] inline nlohmann::json build_manifest(const ManifestInput& in) {
    const auto& c = *in.config;
    const ShardPlan plan{c.seed, c.shard_size};
    nlohmann::json shard_list = nlohmann::json::array();
    for (auto id : plan.shard_seeds(c.samples)) shard_list.push_back({{"index", id}, {"seed", {c.seed, id}}});
    bool pass = true;
    for (const auto& ch : in.checks) pass = pass && ch.pass;
    return {{"format", manifest_format},
            {"version", manifest_version},
            {"code_version", silt::version},
            {"kind", to_string(c.kind)},
            {"seed", c.seed},
            {"config", config_echo(c)},
            {"config_text", c.source},
            {"started_at", utc_timestamp(in.started)},
            {"finished_at", utc_timestamp(in.finished)},
            {"shards",
             {{"shard_size", c.shard_size},
              {"count", plan.shard_count(c.samples)},
              {"stream", "mt19937_64 seeded by seed_seq(seed, shard index); coupling j uses seed + j"},
              {"list", shard_list}}},
            {"workers", worker_count()},
            {"results_csv", in.results_file},
            {"summary", in.summary},
            {"checks", checks_json(in.checks)},
            {"pass", pass}};
}

struct LoadedManifest {
    std::filesystem::path path;
    nlohmann::json data;
    ResultTable results;
};

[[nodiscard]] inline LoadedManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest '" + path.string() + "'");
    LoadedManifest m;
    m.path = path;
    try {
        m.data = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
    }
    try {
        if (m.data.at("format").get<std::string>() != manifest_format)
            throw InputError("manifest '" + path.string() + "' has an unknown format");
        if (m.data.at("version").get<int>() != manifest_version)
            throw InputError("manifest '" + path.string() + "' has an unsupported version");
        for (const char* key : {"kind", "seed", "checks", "pass", "results_csv", "summary", "code_version"})
            if (!m.data.contains(key)) throw InputError("manifest '" + path.string() + "' lacks '" + key + "'");
        const auto csv = path.parent_path() / m.data.at("results_csv").get<std::string>();
        m.results = ResultTable::read(csv.string());
        if (m.results.kind() != m.data.at("kind").get<std::string>())
            throw InputError("manifest '" + path.string() + "' and its results disagree on kind");
    } catch (const nlohmann::json::exception& e) {
        throw InputError("manifest '" + path.string() + "' is malformed: " + e.what());
    }
    return m;
}

}  // namespace silt::experiment
