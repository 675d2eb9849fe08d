// silt: run experiments, summarize manifests, self-test.
//
// Exit status: 0 ok, 1 a check failed, 2 bad input or usage,
// 3 unsupported configuration, 4 numerical failure.

#include "silt/experiment/report.hpp"
#include "silt/experiment/run.hpp"
#include "silt/experiment/selftest.hpp"
#include "silt/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

int run_command(const std::string& config_path, const std::string& output_override) {
    using namespace silt::experiment;
    const auto cfg = parse_config_file(config_path);
    const std::filesystem::path dir = output_override.empty() ? cfg.output : output_override;
    const auto rec = run_and_write(cfg, dir);
    for (const auto& c : rec.outcome.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.value << " <= " << c.tolerance << "\n";
    std::cout << "wrote " << (dir / "results.csv").string() << " and " << rec.manifest.string() << "\n";
    return rec.outcome.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-intersection local time experiments"};
    app.set_version_flag("--version", std::string(silt::version));
    app.require_subcommand(1);

    std::string config_path, output_override;
    auto* run = app.add_subcommand("run", "Run the experiment described by an INI config");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", output_override, "Output directory (overrides [experiment] output)");

    std::vector<std::string> manifests;
    std::string report_dir = "report";
    auto* report = app.add_subcommand("report", "Summarize one or more run manifests");
    report->add_option("manifests", manifests, "manifest.json files")->required();
    report->add_option("--out", report_dir, "Directory for gnuplot data files");

    std::string scratch = (std::filesystem::temp_directory_path() / "silt-selftest").string();
    auto* selftest = app.add_subcommand("selftest", "Quick end-to-end check of every experiment kind");
    selftest->add_option("--scratch", scratch, "Directory for temporary run output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) return run_command(config_path, output_override);
        if (*report) {
            const auto rr = silt::experiment::write_report(manifests, report_dir, std::cout);
            return rr.failed_runs == 0 ? 0 : 1;
        }
        if (*selftest) {
            const int failures = silt::experiment::run_selftest(std::cout, scratch);
            std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
            return failures == 0 ? 0 : 1;
        }
    } catch (const silt::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 3;
    } catch (const silt::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const silt::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
