#pragma once

// Brownian motion and Brownian bridge on finite time grids.

#include "silt/errors.hpp"
#include "silt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace silt {

class TimeGrid {
public:
    // Validates: at least two points, strictly increasing, first = 0, last = T.
    TimeGrid(double T, std::vector<double> points) : T_(T), points_(std::move(points)) {
        if (!(T_ > 0.0) || !std::isfinite(T_)) throw InputError("TimeGrid: T must be positive");
        if (points_.size() < 2) throw InputError("TimeGrid: need at least 2 points");
        if (points_.front() != 0.0) throw InputError("TimeGrid: first point must be 0");
        if (points_.back() != T_) throw InputError("TimeGrid: last point must equal T");
        for (std::size_t i = 1; i < points_.size(); ++i) {
            if (!(points_[i] > points_[i - 1]))
                throw InputError("TimeGrid: points must be strictly increasing");
        }
    }

    // n equal intervals, n + 1 points.
    static TimeGrid uniform(double T, std::size_t intervals) {
        if (intervals < 1) throw InputError("TimeGrid::uniform: need at least one interval");
        if (!(T > 0.0)) throw InputError("TimeGrid: T must be positive");
        std::vector<double> pts(intervals + 1);
        for (std::size_t k = 0; k <= intervals; ++k)
            pts[k] = T * static_cast<double>(k) / static_cast<double>(intervals);
        pts.back() = T;
        return TimeGrid(T, std::move(pts));
    }

    [[nodiscard]] double duration() const noexcept { return T_; }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::size_t intervals() const noexcept { return points_.size() - 1; }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }

    [[nodiscard]] bool is_uniform(double rel_tol = 1e-9) const {
        const double h = T_ / static_cast<double>(intervals());
        for (std::size_t i = 1; i < points_.size(); ++i) {
            if (std::abs((points_[i] - points_[i - 1]) - h) > rel_tol * h) return false;
        }
        return true;
    }

    // Spacing of a uniform grid; throws on non-uniform grids.
    [[nodiscard]] double uniform_step() const {
        if (!is_uniform()) throw InputError("grid is not uniform");
        return T_ / static_cast<double>(intervals());
    }

private:
    double T_;
    std::vector<double> points_;
};

enum class ProcessKind { motion, bridge };

inline const char* to_string(ProcessKind k) { return k == ProcessKind::motion ? "motion" : "bridge"; }

inline ProcessKind parse_process(const std::string& s) {
    if (s == "motion") return ProcessKind::motion;
    if (s == "bridge") return ProcessKind::bridge;
    throw InputError("unknown process '" + s + "' (expected motion|bridge)");
}

struct PathSample {
    TimeGrid grid;
    std::vector<double> values;
    ProcessKind kind = ProcessKind::motion;
    double start = 0.0;  // bridge endpoint a
    double end = 0.0;    // bridge endpoint b
};

inline void check_time(double t, double T, const char* what) {
    if (!(T > 0.0)) throw InputError(std::string(what) + ": T must be positive");
    if (!(t >= 0.0 && t <= T)) throw InputError(std::string(what) + ": time outside [0, T]");
}

// s∧t − st/T
[[nodiscard]] inline double bridge_cov(double s, double t, double T) {
    check_time(s, T, "bridge_cov");
    check_time(t, T, "bridge_cov");
    return std::min(s, t) - s * t / T;
}

// a(1 − t/T) + b t/T
[[nodiscard]] inline double bridge_mean(double t, double T, double a, double b) {
    check_time(t, T, "bridge_mean");
    const double r = t / T;
    return a * (1.0 - r) + b * r;
}

// Standard Brownian motion started at 0: independent N(0, Δt) increments.
[[nodiscard]] inline PathSample sample_motion(const TimeGrid& grid, RngStream& rng) {
    const auto pts = grid.points();
    std::vector<double> v(pts.size());
    v[0] = 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k)
        v[k] = v[k - 1] + std::sqrt(pts[k] - pts[k - 1]) * rng.normal();
    return PathSample{grid, std::move(v), ProcessKind::motion, 0.0, 0.0};
}

// X_t = a(1 − t/T) + b t/T + B_t − (t/T) B_T, endpoints set exactly.
[[nodiscard]] inline PathSample bridge_from_motion(const PathSample& motion, double a, double b) {
    if (motion.kind != ProcessKind::motion)
        throw InputError("bridge_from_motion: input must be a motion path");
    const auto pts = motion.grid.points();
    const double T = motion.grid.duration();
    const double BT = motion.values.back();
    std::vector<double> v(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double r = pts[k] / T;
        v[k] = a * (1.0 - r) + b * r + motion.values[k] - r * BT;
    }
    v.front() = a;
    v.back() = b;
    return PathSample{motion.grid, std::move(v), ProcessKind::bridge, a, b};
}

[[nodiscard]] inline PathSample sample_bridge(const TimeGrid& grid, double a, double b, RngStream& rng) {
    return bridge_from_motion(sample_motion(grid, rng), a, b);
}

// Variance of X_t − X_s for a centred process, |t − s| = u.
[[nodiscard]] inline double increment_variance(ProcessKind kind, double u, double T) {
    return kind == ProcessKind::motion ? u : u * (1.0 - u / T);
}

}  // namespace silt
