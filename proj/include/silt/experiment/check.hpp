#pragma once

#include <string>

namespace silt::experiment {

struct CheckResult {
    std::string name;
    double value = 0.0;      // observed error or statistic
    double tolerance = 0.0;  // pass iff value <= tolerance
    bool pass = false;
    std::string detail;
};

[[nodiscard]] inline CheckResult make_check(std::string name, double value, double tol, std::string detail = {}) {
    return {std::move(name), value, tol, value <= tol, std::move(detail)};
}

}  // namespace silt::experiment
