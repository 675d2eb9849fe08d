#pragma once

// Results tables. Layout:
//   # silt-results v1 kind=<kind>
//   col_a,col_b,...
//   rows...
// Complex quantities occupy two columns <name>_re,<name>_im. Numbers are
// written with 17 significant digits so files round-trip exactly.

#include "silt/errors.hpp"

#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace silt::experiment {

inline constexpr int csv_format_version = 1;

[[nodiscard]] inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class ResultTable {
public:
    ResultTable() = default;
    ResultTable(std::string kind, std::vector<std::string> columns)
        : kind_(std::move(kind)), columns_(std::move(columns)) {}

    class Row {
    public:
        Row& num(double v) {
            cells_.push_back(format_number(v));
            return *this;
        }
        Row& num(std::complex<double> v) { return num(v.real()).num(v.imag()); }
        Row& text(const std::string& s) {
            if (s.find_first_of(",\n\"") != std::string::npos) throw InputError("csv: text cell contains a separator");
            cells_.push_back(s);
            return *this;
        }
        Row& flag(bool b) { return text(b ? "pass" : "fail"); }
        [[nodiscard]] const std::vector<std::string>& cells() const { return cells_; }

    private:
        std::vector<std::string> cells_;
    };

    void add(const Row& r) {
        if (r.cells().size() != columns_.size())
            throw InputError("csv: row has " + std::to_string(r.cells().size()) + " cells, expected " +
                             std::to_string(columns_.size()));
        rows_.push_back(r.cells());
    }

    [[nodiscard]] const std::string& kind() const { return kind_; }
    [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
    [[nodiscard]] const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    [[nodiscard]] std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i] == name) return i;
        throw InputError("csv: no column '" + name + "'");
    }
    [[nodiscard]] double number(std::size_t row, const std::string& name) const {
        return std::stod(rows_.at(row).at(column(name)));
    }
    [[nodiscard]] const std::string& cell(std::size_t row, const std::string& name) const {
        return rows_.at(row).at(column(name));
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os << "# silt-results v" << csv_format_version << " kind=" << kind_ << "\n";
        write_line(os, columns_);
        for (const auto& r : rows_) write_line(os, r);
        return os.str();
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw InputError("cannot write '" + path + "'");
        out << str();
    }

    static ResultTable parse(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        if (!std::getline(in, line)) throw InputError("csv: empty file");
        const std::string prefix = "# silt-results v";
        if (line.rfind(prefix, 0) != 0) throw InputError("csv: missing version header");
        const auto sp = line.find(" kind=");
        if (sp == std::string::npos) throw InputError("csv: header lacks kind");
        if (std::stoi(line.substr(prefix.size(), sp - prefix.size())) != csv_format_version)
            throw InputError("csv: unsupported format version");
        ResultTable t(line.substr(sp + 6), {});
        if (!std::getline(in, line)) throw InputError("csv: missing column line");
        t.columns_ = split(line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto cells = split(line);
            if (cells.size() != t.columns_.size()) throw InputError("csv: ragged row");
            t.rows_.push_back(std::move(cells));
        }
        return t;
    }

    static ResultTable read(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open results '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << "\n";
    }
    static std::vector<std::string> split(const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) out.push_back(c);
        if (!line.empty() && line.back() == ',') out.emplace_back();
        return out;
    }

    std::string kind_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace silt::experiment
