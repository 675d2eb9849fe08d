#pragma once

// Quick end-to-end pass over every experiment kind with small in-memory
// configurations, including a manifest/report round trip.

#include "silt/experiment/report.hpp"
#include "silt/experiment/run.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace silt::experiment {

inline const std::vector<std::pair<std::string, std::string>>& selftest_configs() {
    static const std::vector<std::pair<std::string, std::string>> configs{
        {"silt-mean", "[experiment]\nkind=silt-mean\nseed=11\n[regularization]\neps=0.1,0.01\n"
                      "[sampling]\ngrid_n=64\nsamples=4000\n"},
        {"silt-second-moment", "[experiment]\nkind=silt-second-moment\nseed=12\n[regularization]\neps=0.1\n"
                               "[sampling]\ngrid_n=64\nsamples=4000\n[checks]\nrel_tol=1e-7\n"},
        {"silt-convergence", "[experiment]\nkind=silt-convergence\nseed=13\n[regularization]\neps=0.1,0.03,0.01\n"
                             "[checks]\nrel_tol=1e-7\n"},
        {"exp-silt", "[experiment]\nkind=exp-silt\nseed=14\n[regularization]\neps=0.1,0.01\n"
                     "[sampling]\ngrid_n=64\nsamples=2000\n[coupling]\ng=0,0.5,2\n"},
        {"propagator", "[experiment]\nkind=propagator\nseed=15\n[regularization]\neps=0.1,0.01\n"
                       "[sampling]\ngrid_n=64\nsamples=2000\n[coupling]\ng=0,0.5\n"},
        {"dos", "[experiment]\nkind=dos\nseed=16\n[coupling]\ng=0\n[dos]\nT_max=20\nT_count=1000\n"
                "energies=0.5,1,2\n"},
        {"chaos-verify", "[experiment]\nkind=chaos-verify\nseed=17\n[sampling]\nsamples=20000\n[checks]\ntrials=6\n"},
    };
    return configs;
}

// Returns the number of failing kinds.
inline int run_selftest(std::ostream& os, const std::filesystem::path& scratch) {
    int failures = 0;
    std::vector<std::string> manifests;
    for (const auto& [name, text] : selftest_configs()) {
        try {
            const auto cfg = parse_config_string(text);
            const auto rec = run_and_write(cfg, scratch / name);
            manifests.push_back(rec.manifest.string());
            const bool ok = rec.outcome.pass();
            if (!ok) ++failures;
            os << (ok ? "PASS " : "FAIL ") << name << " (" << rec.outcome.checks.size() << " checks)\n";
            for (const auto& c : rec.outcome.checks)
                if (!c.pass) os << "     failed: " << c.name << " " << c.value << " > " << c.tolerance << "\n";
        } catch (const std::exception& e) {
            ++failures;
            os << "FAIL " << name << ": " << e.what() << "\n";
        }
    }
    try {
        std::ostringstream sink;
        const auto rr = write_report(manifests, scratch / "report", sink);
        const bool ok = rr.runs == manifests.size() && rr.data_files.size() == manifests.size();
        if (!ok) ++failures;
        os << (ok ? "PASS " : "FAIL ") << "report round trip\n";
    } catch (const std::exception& e) {
        ++failures;
        os << "FAIL report round trip: " << e.what() << "\n";
    }
    return failures;
}

}  // namespace silt::experiment
