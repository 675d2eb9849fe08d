#pragma once

// Occupation-grid estimate of the full-square SILT: in one dimension
// ∫∫ δ(X_t − X_s) ds dt = ∫ L(x)² dx with L the occupation density.
// L is binned from the piecewise-linear interpolant of the path and the bin
// grid is averaged over several sub-bin shifts.

#include "silt/errors.hpp"
#include "silt/gaussian_paths.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace silt {

struct LocalTimeEstimate {
    double value = 0.0;       // Σ occ² / bin_width, full-square convention
    double bin_width = 0.0;
    std::size_t shifts = 0;
    bool degenerate = false;  // all occupation in one bin (constant path)
};

// Bin width whose box kernel has the same variance as the pair-sum kernel
// p_ε after self-convolution: 2·w²/12 = 2ε.
[[nodiscard]] inline double matched_bin_width(double eps) {
    if (!(eps > 0.0)) throw InputError("matched_bin_width: eps must be positive");
    return std::sqrt(6.0 * eps);
}

namespace detail {

inline double occupation_square_sum(std::span<const double> x, double h, double bw, double shift,
                                    std::vector<double>& occ, bool& single_bin) {
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    const double origin = std::floor((*mn - shift) / bw) * bw + shift;
    const auto bins = static_cast<std::size_t>((*mx - origin) / bw) + 2;
    occ.assign(bins, 0.0);
    auto bin_of = [&](double v) {
        return std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, (v - origin) / bw)));
    };
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double a = std::min(x[k], x[k + 1]);
        const double b = std::max(x[k], x[k + 1]);
        const std::size_t ia = bin_of(a);
        if (b - a <= 1e-15 * std::max(1.0, std::abs(a))) {
            occ[ia] += h;
            continue;
        }
        const std::size_t ib = bin_of(b);
        const double rate = h / (b - a);
        for (std::size_t i = ia; i <= ib; ++i) {
            const double lo = std::max(a, origin + static_cast<double>(i) * bw);
            const double hi = std::min(b, origin + static_cast<double>(i + 1) * bw);
            if (hi > lo) occ[i] += rate * (hi - lo);
        }
    }
    double s = 0.0;
    std::size_t occupied = 0;
    for (double o : occ) {
        s += o * o;
        if (o > 0.0) ++occupied;
    }
    single_bin = occupied <= 1;
    return s / bw;
}

}  // namespace detail

// Uses every grid interval (not only left nodes). Constant paths put all
// time T into one bin and return T²/bin_width with `degenerate` set.
[[nodiscard]] inline LocalTimeEstimate silt_local_time_oracle(const PathSample& path, double bin_width,
                                                              std::size_t shifts = 8) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
        throw InputError("silt_local_time_oracle: bin_width must be positive");
    if (shifts == 0) throw InputError("silt_local_time_oracle: need at least one shift");
    const double h = path.grid.uniform_step();
    const std::span<const double> x(path.values);
    LocalTimeEstimate est{0.0, bin_width, shifts, true};
    std::vector<double> occ;
    for (std::size_t s = 0; s < shifts; ++s) {
        bool single = false;
        est.value += detail::occupation_square_sum(
            x, h, bin_width, bin_width * static_cast<double>(s) / static_cast<double>(shifts), occ, single);
        est.degenerate = est.degenerate && single;
    }
    est.value /= static_cast<double>(shifts);
    return est;
}

}  // namespace silt
