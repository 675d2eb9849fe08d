#pragma once

// Experiment configuration: an INI file with fixed sections and keys.
// Unknown sections or keys are rejected so typos do not silently fall back
// to defaults.

#include "silt/errors.hpp"
#include "silt/gaussian_paths.hpp"
#include "silt/silt_core.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace silt::experiment {

enum class ExperimentKind { silt_mean, silt_second_moment, silt_convergence, exp_silt, propagator, dos, chaos_verify };

inline const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::silt_mean: return "silt-mean";
        case ExperimentKind::silt_second_moment: return "silt-second-moment";
        case ExperimentKind::silt_convergence: return "silt-convergence";
        case ExperimentKind::exp_silt: return "exp-silt";
        case ExperimentKind::propagator: return "propagator";
        case ExperimentKind::dos: return "dos";
        default: return "chaos-verify";
    }
}

inline ExperimentKind parse_kind(const std::string& s) {
    for (auto k : {ExperimentKind::silt_mean, ExperimentKind::silt_second_moment, ExperimentKind::silt_convergence,
                   ExperimentKind::exp_silt, ExperimentKind::propagator, ExperimentKind::dos,
                   ExperimentKind::chaos_verify})
        if (s == to_string(k)) return k;
    throw InputError("unknown experiment kind '" + s + "'");
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::silt_mean;
    std::uint64_t seed = 0;
    std::string output = "results";

    // [process]
    double T = 1.0;
    ProcessKind process = ProcessKind::bridge;
    double a = 0.0;
    double b = 0.0;
    std::optional<SiltConvention> convention;  // kind default when unset

    // [regularization]
    std::vector<double> eps{1e-1, 1e-2, 1e-3};

    // [sampling]
    std::size_t grid_n = 512;
    std::size_t samples = 10000;
    std::size_t shard_size = 2048;

    // [coupling]
    std::vector<double> g{0.0};
    double x0 = 0.0;

    // [dos]
    double dos_T_max = 40.0;
    std::size_t dos_T_count = 4000;
    std::vector<double> energies{0.5, 1.0, 2.0};
    double damping_time = 0.0;

    // [checks]
    double z_max = 3.0;
    double rel_tol = 1e-8;
    std::size_t trials = 20;

    std::string source;  // verbatim config text

    // ordered for the SILT moment kinds, full-square for the exponential
    // functionals.
    [[nodiscard]] SiltConvention effective_convention() const {
        if (convention) return *convention;
        return kind == ExperimentKind::exp_silt || kind == ExperimentKind::propagator || kind == ExperimentKind::dos
                   ? SiltConvention::full_square
                   : SiltConvention::ordered;
    }
};

namespace detail {

inline std::vector<double> parse_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        const std::string tok = item.substr(b, e - b + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw InputError("config: '" + key + "' has non-numeric entry '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InputError("config: '" + key + "' is empty");
    return out;
}

inline double parse_double(const std::string& key, const std::string& s) {
    const auto v = parse_list(key, s);
    if (v.size() != 1) throw InputError("config: '" + key + "' expects a single number");
    return v.front();
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!s.empty() && s.front() == '-') throw std::invalid_argument("negative");
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw InputError("config: '" + key + "' must be a non-negative integer");
    return v;
}

}  // namespace detail

inline const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema{
        {"experiment", {"kind", "seed", "output"}},
        {"process", {"T", "process", "a", "b", "convention"}},
        {"regularization", {"eps"}},
        {"sampling", {"grid_n", "samples", "shard_size"}},
        {"coupling", {"g", "x0"}},
        {"dos", {"T_max", "T_count", "energies", "damping_time"}},
        {"checks", {"z_max", "rel_tol", "trials"}},
    };
    return schema;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
    boost::property_tree::ptree pt;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw InputError(std::string("config parse error: ") + e.message() + " (line " +
                         std::to_string(e.line()) + ")");
    }
    const auto& schema = config_schema();
    for (const auto& [section, body] : pt) {
        const auto it = schema.find(section);
        if (it == schema.end()) throw InputError("config: unknown section [" + section + "]");
        if (!body.data().empty()) throw InputError("config: key '" + section + "' outside any section");
        for (const auto& [key, v] : body)
            if (!it->second.count(key)) throw InputError("config: unknown key '" + key + "' in [" + section + "]");
    }
    auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = pt.get_optional<std::string>(boost::property_tree::ptree::path_type(path, '/'))) return *v;
        return std::nullopt;
    };

    ExperimentConfig c;
    c.source = text;
    const auto kind = get("experiment/kind");
    if (!kind) throw InputError("config: [experiment] kind is required");
    c.kind = parse_kind(*kind);
    const auto seed = get("experiment/seed");
    if (!seed) throw InputError("config: [experiment] seed is required");
    c.seed = detail::parse_uint("seed", *seed);
    if (auto v = get("experiment/output")) c.output = *v;

    if (auto v = get("process/T")) c.T = detail::parse_double("T", *v);
    if (auto v = get("process/process")) c.process = parse_process(*v);
    if (auto v = get("process/a")) c.a = detail::parse_double("a", *v);
    if (auto v = get("process/b")) c.b = detail::parse_double("b", *v);
    if (auto v = get("process/convention")) c.convention = parse_convention(*v);
    if (auto v = get("regularization/eps")) c.eps = detail::parse_list("eps", *v);
    if (auto v = get("sampling/grid_n")) c.grid_n = detail::parse_uint("grid_n", *v);
    if (auto v = get("sampling/samples")) c.samples = detail::parse_uint("samples", *v);
    if (auto v = get("sampling/shard_size")) c.shard_size = detail::parse_uint("shard_size", *v);
    if (auto v = get("coupling/g")) c.g = detail::parse_list("g", *v);
    if (auto v = get("coupling/x0")) c.x0 = detail::parse_double("x0", *v);
    if (auto v = get("dos/T_max")) c.dos_T_max = detail::parse_double("T_max", *v);
    if (auto v = get("dos/T_count")) c.dos_T_count = detail::parse_uint("T_count", *v);
    if (auto v = get("dos/energies")) c.energies = detail::parse_list("energies", *v);
    if (auto v = get("dos/damping_time")) c.damping_time = detail::parse_double("damping_time", *v);
    if (auto v = get("checks/z_max")) c.z_max = detail::parse_double("z_max", *v);
    if (auto v = get("checks/rel_tol")) c.rel_tol = detail::parse_double("rel_tol", *v);
    if (auto v = get("checks/trials")) c.trials = detail::parse_uint("trials", *v);

    if (!(c.T > 0.0)) throw InputError("config: T must be positive");
    for (double e : c.eps)
        if (!(e > 0.0)) throw InputError("config: eps entries must be positive");
    for (double g : c.g)
        if (!(g >= 0.0)) throw InputError("config: g entries must be >= 0");
    if (c.grid_n < 2) throw InputError("config: grid_n must be >= 2");
    if (c.samples < 2) throw InputError("config: samples must be >= 2");
    if (c.shard_size < 1) throw InputError("config: shard_size must be >= 1");
    if (!(c.z_max > 0.0)) throw InputError("config: z_max must be positive");
    if (!(c.rel_tol > 0.0)) throw InputError("config: rel_tol must be positive");
    if (!(c.dos_T_max > 0.0) || c.dos_T_count < 4) throw InputError("config: dos needs T_max > 0 and T_count >= 4");
    if (c.damping_time < 0.0) throw InputError("config: damping_time must be >= 0");
    if (c.output.empty()) throw InputError("config: output must not be empty");
    return c;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

}  // namespace silt::experiment
