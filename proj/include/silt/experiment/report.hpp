#pragma once

// Human-readable summary of one or more finished runs plus gnuplot-ready
// data files. Output is independent of timestamps so reports diff cleanly.

#include "silt/errors.hpp"
#include "silt/experiment/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace silt::experiment {

namespace detail {

inline void print_table(std::ostream& os, const ResultTable& t) {
    std::vector<std::size_t> w(t.columns().size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = t.columns()[i].size();
    std::vector<std::vector<std::string>> shown;
    for (const auto& r : t.rows()) {
        std::vector<std::string> s;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::string cell = r[i];
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (!cell.empty() && end && *end == '\0') {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.6g", v);
                cell = buf;
            }
            w[i] = std::max(w[i], cell.size());
            s.push_back(std::move(cell));
        }
        shown.push_back(std::move(s));
    }
    auto line = [&](const std::vector<std::string>& cells) {
        os << "   ";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            os << ' ' << cells[i] << std::string(w[i] - cells[i].size(), ' ');
        }
        os << '\n';
    };
    line(t.columns());
    for (const auto& s : shown) line(s);
}

inline void write_dat(const std::filesystem::path& file, const ResultTable& t) {
    std::ofstream out(file);
    if (!out) throw InputError("cannot write '" + file.string() + "'");
    out << "#";
    for (const auto& c : t.columns()) out << ' ' << c;
    out << '\n';
    for (const auto& r : t.rows()) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            char* end = nullptr;
            std::strtod(r[i].c_str(), &end);
            const bool numeric = !r[i].empty() && end && *end == '\0';
            out << (i ? " " : "") << (numeric ? r[i] : "\"" + r[i] + "\"");
        }
        out << '\n';
    }
}

}  // namespace detail

struct ReportResult {
    std::size_t runs = 0;
    std::size_t failed_runs = 0;
    std::vector<std::filesystem::path> data_files;
};

inline ReportResult write_report(const std::vector<std::string>& manifests, const std::filesystem::path& out_dir,
                                 std::ostream& os) {
    if (manifests.empty()) throw InputError("report: no manifests given");
    std::vector<LoadedManifest> loaded;
    for (const auto& p : manifests) loaded.push_back(load_manifest(p));
    std::filesystem::create_directories(out_dir);

    ReportResult rr;
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        const auto& m = loaded[i];
        const auto& d = m.data;
        const bool pass = d.at("pass").get<bool>();
        os << "== " << m.path.string() << "\n";
        os << "   kind " << d.at("kind").get<std::string>() << ", seed " << d.at("seed").dump() << ", code "
           << d.at("code_version").get<std::string>() << ", " << (pass ? "PASS" : "FAIL") << "\n";
        os << "   checks:\n";
        for (const auto& c : d.at("checks")) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.4g <= %.4g", c.at("value").get<double>(),
                          c.at("tolerance").get<double>());
            os << "     " << (c.at("pass").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>()
               << "  " << buf << "\n";
        }
        if (!d.at("summary").empty()) os << "   summary: " << d.at("summary").dump() << "\n";
        os << "   results:\n";
        detail::print_table(os, m.results);
        char name[32];
        std::snprintf(name, sizeof name, "%02zu_", i);
        const auto file = out_dir / (name + d.at("kind").get<std::string>() + ".dat");
        detail::write_dat(file, m.results);
        rr.data_files.push_back(file);
        ++rr.runs;
        if (!pass) ++rr.failed_runs;
        os << "\n";
    }
    os << rr.runs << " run(s), " << rr.failed_runs << " failed; data files in " << out_dir.string() << "\n";
    return rr;
}

}  // namespace silt::experiment
