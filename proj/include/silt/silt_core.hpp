#pragma once

// ε-regularized self-intersection local time (SILT) of Brownian paths:
// pair-sum estimators on sampled paths, deterministic quadratures for the
// mean, and the interval-overlap geometry used by the second-moment
// integrals.

#include "silt/errors.hpp"
#include "silt/gaussian_paths.hpp"
#include "silt/monte_carlo.hpp"
#include "silt/quadrature.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace silt {

// ordered:     ∫_0^T ∫_0^t p_ε(X_t − X_s) ds dt
// full_square: ∫_0^T ∫_0^T p_ε(X_t − X_s) ds dt  (= 2 × ordered)
enum class SiltConvention { ordered, full_square };

inline const char* to_string(SiltConvention c) {
    return c == SiltConvention::ordered ? "ordered" : "full-square";
}

inline SiltConvention parse_convention(const std::string& s) {
    if (s == "ordered") return SiltConvention::ordered;
    if (s == "full-square" || s == "full_square") return SiltConvention::full_square;
    throw InputError("unknown SILT convention '" + s + "' (expected ordered|full-square)");
}

inline double convention_factor(SiltConvention c) { return c == SiltConvention::ordered ? 1.0 : 2.0; }

struct SiltEstimate {
    double value = 0.0;
    double epsilon = 0.0;
    SiltConvention convention = SiltConvention::ordered;
    std::size_t n_grid = 0;
    std::size_t n_samples = 0;
    double std_error = 0.0;
};

[[nodiscard]] inline double heat_kernel(double x, double eps) {
    if (!(eps > 0.0)) throw InputError("heat_kernel: eps must be positive");
    return std::exp(-x * x / (2.0 * eps)) / std::sqrt(2.0 * M_PI * eps);
}

namespace detail {

inline void check_eps_list(std::span<const double> eps_list) {
    if (eps_list.empty()) throw InputError("silt_pair_sum: empty eps list");
    for (double e : eps_list)
        if (!(e > 0.0) || !std::isfinite(e)) throw InputError("silt_pair_sum: eps must be positive");
}

// Ordered sums Σ_{k>l} exp(−(x_k − x_l)²/2ε) for several ε at once, with
// the squared differences of each row shared across ε. `even_out`, when
// given, also receives the sums restricted to even k and l.
class PairSumWorkspace {
public:
    void evaluate(std::span<const double> nodes, std::span<const double> eps_list,
                  std::span<double> out, std::span<double> even_out = {}) {
        const auto n = static_cast<Eigen::Index>(nodes.size());
        const bool even = !even_out.empty();
        x_ = Eigen::Map<const Eigen::ArrayXd>(nodes.data(), n);
        d2_.resize(n);
        row_.resize(n);
        scale_.resize(static_cast<Eigen::Index>(eps_list.size()));
        for (std::size_t e = 0; e < eps_list.size(); ++e)
            scale_[static_cast<Eigen::Index>(e)] = -0.5 / eps_list[e];
        for (double& o : out) o = 0.0;
        for (double& o : even_out) o = 0.0;
        for (Eigen::Index k = 1; k < n; ++k) {
            d2_.head(k) = (x_.head(k) - x_[k]).square();
            for (std::size_t e = 0; e < eps_list.size(); ++e) {
                const auto se = scale_[static_cast<Eigen::Index>(e)];
                if (!even || k % 2) {
                    out[e] += (d2_.head(k) * se).exp().sum();
                    continue;
                }
                row_.head(k) = (d2_.head(k) * se).exp();
                out[e] += row_.head(k).sum();
                even_out[e] += Eigen::Map<const Eigen::ArrayXd, 0, Eigen::InnerStride<2>>(row_.data(), k / 2).sum();
            }
        }
    }

private:
    Eigen::ArrayXd x_;
    Eigen::ArrayXd d2_;
    Eigen::ArrayXd row_;
    Eigen::ArrayXd scale_;
};

}  // namespace detail

// Pair-sum estimates (T/n)² Σ p_ε(X_{t_k} − X_{t_l}) over the n left nodes
// t_0..t_{n−1} of a uniform grid with n intervals. Diagonal terms k = l are
// excluded; the full-square value is exactly twice the ordered one.
inline std::vector<double> silt_pair_sums(const PathSample& path, std::span<const double> eps_list,
                                          SiltConvention convention,
                                          detail::PairSumWorkspace* workspace = nullptr) {
    detail::check_eps_list(eps_list);
    const double h = path.grid.uniform_step();
    const std::size_t n = path.grid.intervals();
    std::vector<double> raw(eps_list.size());
    detail::PairSumWorkspace local;
    (workspace ? *workspace : local)
        .evaluate(std::span<const double>(path.values.data(), n), eps_list, raw);
    const double factor = convention_factor(convention);
    for (std::size_t e = 0; e < eps_list.size(); ++e)
        raw[e] = factor * (h * h / std::sqrt(2.0 * M_PI * eps_list[e]) * raw[e]);
    return raw;
}

struct NestedPairSums {
    std::vector<double> fine;    // spacing h
    std::vector<double> coarse;  // even nodes only, spacing 2h
};

// Pair sums on the grid and on its even-node sub-grid from one pass; needs
// an even number of intervals.
inline NestedPairSums silt_pair_sums_nested(const PathSample& path, std::span<const double> eps_list,
                                            SiltConvention convention,
                                            detail::PairSumWorkspace* workspace = nullptr) {
    detail::check_eps_list(eps_list);
    const double h = path.grid.uniform_step();
    const std::size_t n = path.grid.intervals();
    if (n % 2 != 0) throw InputError("silt_pair_sums_nested: need an even number of intervals");
    NestedPairSums r{std::vector<double>(eps_list.size()), std::vector<double>(eps_list.size())};
    detail::PairSumWorkspace local;
    (workspace ? *workspace : local)
        .evaluate(std::span<const double>(path.values.data(), n), eps_list, r.fine, r.coarse);
    const double factor = convention_factor(convention);
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        const double c = factor * h * h / std::sqrt(2.0 * M_PI * eps_list[e]);
        r.fine[e] *= c;
        r.coarse[e] *= 4.0 * c;
    }
    return r;
}

[[nodiscard]] inline double silt_pair_sum(const PathSample& path, double eps, SiltConvention convention) {
    const std::array<double, 1> e{eps};
    return silt_pair_sums(path, e, convention).front();
}

// E p_ε(X_t − X_s) = (2π(σ²(t − s) + ε))^{−1/2}; the mean of the ordered
// SILT reduces to ∫_0^T (T − u)(2π(σ²(u) + ε))^{−1/2} du. eps = 0 is allowed.
[[nodiscard]] inline double mean_silt_quadrature(double T, double eps, ProcessKind process,
                                                 SiltConvention convention,
                                                 const quad::Options& opt = {}) {
    if (!(T > 0.0)) throw InputError("mean_silt_quadrature: T must be positive");
    if (!(eps >= 0.0)) throw InputError("mean_silt_quadrature: eps must be >= 0");
    const quad::SineSquaredMap map{T};
    auto f = [&](double theta) {
        const double u = map.u(theta);
        const double var = increment_variance(process, u, T) + eps;
        if (var <= 0.0) return 0.0;
        return (T - u) / std::sqrt(2.0 * M_PI * var) * map.jacobian(theta);
    };
    const auto r = quad::integrate(f, 0.0, 1.0, opt, "mean_silt_quadrature");
    return convention_factor(convention) * r.value;
}

// Exact expectation of the pair-sum estimator on a uniform grid with n
// intervals: (T/n)² Σ_{j=1}^{n−1} (n − j)(2π(σ²(jh) + ε))^{−1/2}.
[[nodiscard]] inline double mean_silt_discrete(double T, std::size_t n, double eps, ProcessKind process,
                                               SiltConvention convention) {
    if (!(T > 0.0)) throw InputError("mean_silt_discrete: T must be positive");
    if (n < 1) throw InputError("mean_silt_discrete: need at least one interval");
    if (!(eps >= 0.0)) throw InputError("mean_silt_discrete: eps must be >= 0");
    const double h = T / static_cast<double>(n);
    double s = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        const double var = increment_variance(process, static_cast<double>(j) * h, T) + eps;
        s += static_cast<double>(n - j) / std::sqrt(2.0 * M_PI * var);
    }
    return convention_factor(convention) * h * h * s;
}

// ---------------------------------------------------------------------------
// Interval-overlap geometry of the second-moment integrals.

enum class OverlapRegion { D1, D2, D3 };

inline const char* to_string(OverlapRegion r) {
    switch (r) {
        case OverlapRegion::D1: return "D1";
        case OverlapRegion::D2: return "D2";
        default: return "D3";
    }
}

// Intervals are relabelled so that t1 <= t2; then
//   D1: s1 < t1 <= s2 < t2  (disjoint, m = 0)
//   D2: s1 < s2 < t1 < t2   (partial,  m = t1 − s2)
//   D3: s2 <= s1 < t1 <= t2 (nested,   m = t1 − s1)
struct OverlapGeometry {
    double s1, t1, s2, t2;
    double m;
    OverlapRegion region;
    bool swapped;
};

[[nodiscard]] inline OverlapGeometry overlap_length(double s1, double t1, double s2, double t2) {
    if (!(s1 < t1) || !(s2 < t2)) throw InputError("overlap_length: degenerate interval");
    bool swapped = false;
    if (t1 > t2 || (t1 == t2 && s1 < s2)) {
        std::swap(s1, s2);
        std::swap(t1, t2);
        swapped = true;
    }
    if (t1 <= s2) return {s1, t1, s2, t2, 0.0, OverlapRegion::D1, swapped};
    if (s1 < s2) return {s1, t1, s2, t2, t1 - s2, OverlapRegion::D2, swapped};
    return {s1, t1, s2, t2, t1 - s1, OverlapRegion::D3, swapped};
}

namespace detail {
inline void check_interval(double s, double t, double T, const char* what) {
    if (!(T > 0.0)) throw InputError(std::string(what) + ": T must be positive");
    if (!(s >= 0.0 && t <= T)) throw InputError(std::string(what) + ": interval outside [0, T]");
    if (!(s <= t)) throw InputError(std::string(what) + ": interval endpoints reversed");
}
}  // namespace detail

// det Σ of (X_{t1} − X_{s1}, X_{t2} − X_{s2}) for the bridge:
// [u1 u2 (T − u1 − u2 + 2m) − T m²] / T with u_j = t_j − s_j.
[[nodiscard]] inline double increment_cov_det(double s1, double t1, double s2, double t2, double T) {
    detail::check_interval(s1, t1, T, "increment_cov_det");
    detail::check_interval(s2, t2, T, "increment_cov_det");
    const double u1 = t1 - s1;
    const double u2 = t2 - s2;
    const double m = std::max(0.0, std::min(t1, t2) - std::max(s1, s2));
    return (u1 * u2 * (T - (u1 - m) - (u2 - m)) - T * (m * m)) / T;
}

// det(Σ + diag(ε1, ε2)) = det Σ + ε1 var2 + ε2 var1 + ε1 ε2.
[[nodiscard]] inline double increment_cov_det_regularized(double s1, double t1, double s2, double t2,
                                                          double T, double eps1, double eps2) {
    const double det = increment_cov_det(s1, t1, s2, t2, T);
    const double var1 = increment_variance(ProcessKind::bridge, t1 - s1, T);
    const double var2 = increment_variance(ProcessKind::bridge, t2 - s2, T);
    return det + eps1 * var2 + eps2 * var1 + eps1 * eps2;
}

// ---------------------------------------------------------------------------
// Monte Carlo moments of the pair-sum estimator.

struct SiltMcSpec {
    double T = 1.0;
    ProcessKind process = ProcessKind::bridge;
    double start = 0.0;  // bridge endpoints a, b
    double end = 0.0;
    std::vector<double> eps;
    std::size_t grid_n = 512;
    std::size_t n_samples = 10000;
    SiltConvention convention = SiltConvention::ordered;
    ShardPlan shards{};
};

struct SiltMoments {
    SiltEstimate mean;            // first moment
    double second_moment = 0.0;   // E[I²]
    double second_moment_std_error = 0.0;
};

inline std::vector<SiltMoments> silt_moments_mc(const SiltMcSpec& spec) {
    detail::check_eps_list(spec.eps);
    const TimeGrid grid = TimeGrid::uniform(spec.T, spec.grid_n);
    const std::size_t ne = spec.eps.size();
    struct State {
        detail::PairSumWorkspace ws;
    };
    auto moments = sharded_moments(
        spec.n_samples, 2 * ne, spec.shards, [] { return State{}; },
        [&](RngStream& rng, std::span<double> out, State& st) {
            const PathSample path = spec.process == ProcessKind::motion
                                        ? sample_motion(grid, rng)
                                        : sample_bridge(grid, spec.start, spec.end, rng);
            const auto v = silt_pair_sums(path, spec.eps, spec.convention, &st.ws);
            for (std::size_t e = 0; e < ne; ++e) {
                out[2 * e] = v[e];
                out[2 * e + 1] = v[e] * v[e];
            }
        });
    std::vector<SiltMoments> result(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        auto& r = result[e];
        r.mean = SiltEstimate{moments[2 * e].mean(), spec.eps[e],          spec.convention,
                              spec.grid_n,           spec.n_samples,       moments[2 * e].std_error()};
        r.second_moment = moments[2 * e + 1].mean();
        r.second_moment_std_error = moments[2 * e + 1].std_error();
    }
    return result;
}

}  // namespace silt
