#pragma once

// Second moments E[I_ε1 I_ε2] of the ordered ε-regularized SILT.
//
// For two increments over [s1, s1 + u1] and [s2, s2 + u2] with overlap m,
//   E[p_ε1(ΔX_1) p_ε2(ΔX_2)] = (2π)^{−1} ((σ1² + ε1)(σ2² + ε2) − c²)^{−1/2},
// c = m − u1 u2 / T for the bridge (c = m for motion). Integrating over the
// offset r = s2 − s1 at fixed (u1, u2) is done in closed form: on each piece
// where m(r) is linear the integrand is (α + βy)(Q − y²)^{−1/2}. The remaining
// (u1, u2) integral is adaptive.

#include "silt/errors.hpp"
#include "silt/gaussian_paths.hpp"
#include "silt/quadrature.hpp"
#include "silt/silt_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace silt {

struct SecondMomentResult {
    // γ_2^l = 2π ∫_{D_l} det(Σ + εI)^{−1/2}, symmetrized over the relabelling
    // of the two intervals when ε1 != ε2.
    std::array<double, 3> region{};
    std::array<double, 3> region_error{};
    std::array<bool, 3> region_converged{true, true, true};
    double gamma = 0.0;          // γ_2^1 + γ_2^2 + γ_2^3
    double second_moment = 0.0;  // E[I_ε1 I_ε2] = γ_2 / (2π²)
    double abs_error = 0.0;      // error estimate of second_moment

    [[nodiscard]] bool converged() const {
        return region_converged[0] && region_converged[1] && region_converged[2];
    }
};

namespace detail {

struct OffsetPiece {
    double value;
    OverlapRegion region;
};

// ∫ W(r) (Q − (m(r) − c0)²)^{−1/2} dr over all offsets, split by region.
// W(r) = measure of s1 with both intervals inside [0, T].
inline std::array<double, 3> offset_integral(double u1, double u2, double T, double A, double B,
                                             double c0) {
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    const double Q = A * B;
    if (!(Q > 0.0)) return acc;
    const double sqrtQ = std::sqrt(Q);

    const double r_lo = u1 - T;
    const double r_hi = T - u2;
    if (!(r_hi > r_lo)) return acc;
    std::array<double, 6> br{r_lo, -u2, 0.0, u1 - u2, u1, r_hi};
    std::sort(br.begin(), br.end());

    auto W = [&](double r) { return std::min(T - u1, T - r - u2) - std::max(0.0, -r); };
    // ∫_ya^yb (α + β y)(Q − y²)^{−1/2} dy; the root difference is taken in a
    // cancellation-free form since Q can dwarf y².
    auto F = [&](double alpha, double beta, double ya, double yb) {
        const double za = std::clamp(ya / sqrtQ, -1.0, 1.0);
        const double zb = std::clamp(yb / sqrtQ, -1.0, 1.0);
        const double ra = std::sqrt(std::max(0.0, Q - ya * ya));
        const double rb = std::sqrt(std::max(0.0, Q - yb * yb));
        const double dr = ra + rb > 0.0 ? (yb - ya) * (yb + ya) / (ra + rb) : 0.0;
        return alpha * (std::asin(zb) - std::asin(za)) + beta * dr;
    };

    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double ra = std::max(br[i], r_lo);
        const double rb = std::min(br[i + 1], r_hi);
        if (!(rb > ra)) continue;
        const double rm = 0.5 * (ra + rb);

        const double lo = std::max(0.0, rm);
        const double hi = std::min(u1, rm + u2);
        const double w_mid = W(rm);
        const double w_slope = (rm < u1 - u2 ? 0.0 : -1.0) + (rm < 0.0 ? 1.0 : 0.0);

        if (!(hi > lo)) {
            const double f = 1.0 / std::sqrt(std::max(Q - c0 * c0, 0.0));
            if (std::isfinite(f)) acc[0] += f * w_mid * (rb - ra);
            continue;
        }
        const double m_mid = hi - lo;
        const double m_slope = (rm + u2 < u1 ? 1.0 : 0.0) - (rm < 0.0 ? 0.0 : 1.0);
        if (m_slope == 0.0) {
            const double y = m_mid - c0;
            const double g = Q - y * y;
            if (g > 0.0) acc[2] += w_mid * (rb - ra) / std::sqrt(g);
            continue;
        }
        // y = m − c0 moves with slope ±1 in r, so W = α + β y on this piece.
        const double y_mid = m_mid - c0;
        const double beta = w_slope * m_slope;
        const double alpha = w_mid - beta * y_mid;
        const double ya = y_mid + m_slope * (ra - rm);
        const double yb = y_mid + m_slope * (rb - rm);
        acc[1] += m_slope * F(alpha, beta, ya, yb);
    }
    return acc;
}

}  // namespace detail

// E[I_ε1 I_ε2] for the ordered convention, plus region-resolved γ_2^l.
// eps1 = eps2 = 0 is allowed (the integrand singularities are integrable).
// A region counts as converged when its outer integral converged and the
// combined outer and integrated inner error estimate is within rel_tol of
// its value.
inline SecondMomentResult second_moment_quadrature(double T, double eps1, double eps2,
                                                   ProcessKind process = ProcessKind::bridge,
                                                   const quad::Options& opt = {},
                                                   bool throw_on_failure = true) {
    if (!(T > 0.0)) throw InputError("second_moment_quadrature: T must be positive");
    if (!(eps1 >= 0.0) || !(eps2 >= 0.0))
        throw InputError("second_moment_quadrature: eps must be >= 0");

    const quad::SineSquaredMap map{T};
    const bool bridge = process == ProcessKind::bridge;
    SecondMomentResult result;

    for (int region = 0; region < 3; ++region) {
        std::vector<std::pair<double, double>> inner_err;  // (theta1, error of the inner integral)
        auto inner = [&](double theta1) {
            const double u1 = map.u(theta1);
            const double j1 = map.jacobian(theta1);
            const double A = increment_variance(process, u1, T) + eps1;
            auto g = [&](double theta2) {
                const double u2 = map.u(theta2);
                const double B = increment_variance(process, u2, T) + eps2;
                const double c0 = bridge ? u1 * u2 / T : 0.0;
                return detail::offset_integral(u1, u2, T, A, B, c0)[region] * map.jacobian(theta2);
            };
            quad::Options io = opt;
            io.rel_tol = opt.rel_tol * 0.25;
            io.max_depth = std::min(opt.max_depth, 12u);
            // Kinks on the diagonal u1 = u2 (theta2 = theta1) and on the
            // anti-diagonal u1 + u2 = T (theta2 = 1 − theta1).
            std::array<double, 4> cuts{0.0, std::min(theta1, 1.0 - theta1),
                                       std::max(theta1, 1.0 - theta1), 1.0};
            double value = 0.0, err = 0.0;
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                if (!(cuts[c + 1] > cuts[c])) continue;
                // sin² map per piece: at eps = 0 the integrand has square-root
                // behaviour at the cuts.
                const quad::SineSquaredMap piece_map{cuts[c + 1] - cuts[c]};
                auto gp = [&, a = cuts[c]](double t) { return g(a + piece_map.u(t)) * piece_map.jacobian(t); };
                const auto piece = quad::integrate_unchecked(gp, 0.0, 1.0, io);
                value += piece.value;
                err += piece.error;
            }
            inner_err.emplace_back(theta1, err * j1);
            return value * j1;
        };
        // The two kink lines cross at theta1 = 1/2.
        double value = 0.0, err = 0.0;
        bool outer_ok = true;
        for (const auto& [a, b] : {std::pair{0.0, 0.5}, std::pair{0.5, 1.0}}) {
            const auto r = quad::integrate_unchecked(inner, a, b, opt);
            value += r.value;
            err += r.error;
            outer_ok = outer_ok && r.converged;
        }
        // Inner errors integrated over theta1 by the trapezoid rule on the
        // outer nodes, extended flat to both ends.
        std::sort(inner_err.begin(), inner_err.end());
        double inner_total = 0.0;
        if (!inner_err.empty()) {
            inner_total = inner_err.front().first * inner_err.front().second +
                          (1.0 - inner_err.back().first) * inner_err.back().second;
            for (std::size_t i = 1; i < inner_err.size(); ++i)
                inner_total += 0.5 * (inner_err[i].first - inner_err[i - 1].first) *
                               (inner_err[i].second + inner_err[i - 1].second);
        }
        // region integral J over the full domain D; γ_2^l = π J.
        result.region[region] = M_PI * value;
        result.region_error[region] = M_PI * (err + inner_total);
        result.region_converged[region] =
            outer_ok && result.region_error[region] <= std::max(opt.rel_tol * std::abs(result.region[region]),
                                                                opt.abs_tol);
    }
    for (int l = 0; l < 3; ++l) {
        result.gamma += result.region[l];
        result.abs_error += result.region_error[l];
    }
    result.second_moment = result.gamma / (2.0 * M_PI * M_PI);
    result.abs_error /= 2.0 * M_PI * M_PI;
    if (throw_on_failure && !result.converged()) {
        throw NumericError("second_moment_quadrature: region D" +
                               std::to_string(1 + std::distance(result.region_converged.begin(),
                                                                std::find(result.region_converged.begin(),
                                                                          result.region_converged.end(),
                                                                          false))) +
                               " did not converge",
                           result.abs_error / std::max(result.second_moment, 1e-300));
    }
    return result;
}

inline SecondMomentResult second_moment_quadrature(double T, double eps, const quad::Options& opt = {}) {
    return second_moment_quadrature(T, eps, eps, ProcessKind::bridge, opt);
}

// Direct nested 4-D quadrature of γ_2^l over D_1, D_2, D_3 using the
// closed-form determinant [u1u2(T − u1 − u2 + 2m_l) − T m_l²]/T + ε(σ1² + σ2²) + ε².
// Much slower than second_moment_quadrature; kept as an independent route.
inline SecondMomentResult second_moment_quadrature_4d(double T, double eps, const quad::Options& opt = {}) {
    if (!(T > 0.0)) throw InputError("second_moment_quadrature_4d: T must be positive");
    if (!(eps >= 0.0)) throw InputError("second_moment_quadrature_4d: eps must be >= 0");

    auto density = [&](double s1, double t1, double s2, double t2) {
        const double d = increment_cov_det_regularized(s1, t1, s2, t2, T, eps, eps);
        return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
    };
    // ∫_0^L f(x) dx with x = L sin²(πθ/2), softening endpoint singularities.
    auto mapped = [&](auto&& f, double L, const quad::Options& o, bool& ok) {
        if (!(L > 0.0)) return 0.0;
        const quad::SineSquaredMap m{L};
        auto r = quad::integrate_unchecked([&](double th) { return f(m.u(th)) * m.jacobian(th); }, 0.0,
                                           1.0, o);
        ok = ok && r.converged;
        return r.value;
    };
    quad::Options o4 = opt;
    SecondMomentResult result;
    for (int region = 0; region < 3; ++region) {
        bool ok = true;
        auto level1 = [&](double t2) {
            auto level2 = [&](double b) {
                auto level3 = [&](double c) {
                    auto level4 = [&](double d) {
                        switch (region) {
                            case 0: return density(d, c, b, t2);  // s1=d < t1=c < s2=b < t2
                            case 1: return density(d, b, c, t2);  // s1=d < s2=c < t1=b < t2
                            default: return density(c, b, d, t2); // s2=d < s1=c < t1=b < t2
                        }
                    };
                    return mapped(level4, c, o4, ok);
                };
                return mapped(level3, b, o4, ok);
            };
            return mapped(level2, t2, o4, ok);
        };
        result.region[region] = 2.0 * M_PI * mapped(level1, T, o4, ok);
        result.region_converged[region] = ok;
    }
    for (double g : result.region) result.gamma += g;
    result.second_moment = result.gamma / (2.0 * M_PI * M_PI);
    return result;
}

// Exact E[S_n(ε1) S_n(ε2)] of the ordered pair-sum estimator on a uniform
// grid with n intervals (left nodes t_0..t_{n−1}, diagonal excluded).
// O(n³): pairs are indexed by their index lengths j1, j2 and offset ρ.
[[nodiscard]] inline double second_moment_discrete(double T, std::size_t n, double eps1, double eps2,
                                                   ProcessKind process = ProcessKind::bridge) {
    if (!(T > 0.0)) throw InputError("second_moment_discrete: T must be positive");
    if (n < 2) throw InputError("second_moment_discrete: need at least two intervals");
    if (!(eps1 >= 0.0) || !(eps2 >= 0.0)) throw InputError("second_moment_discrete: eps must be >= 0");
    const double h = T / static_cast<double>(n);
    const long N = static_cast<long>(n) - 1;  // largest node index
    const bool bridge = process == ProcessKind::bridge;
    std::vector<double> var(n);
    for (std::size_t j = 0; j < n; ++j) var[j] = increment_variance(process, static_cast<double>(j) * h, T);

    double total = 0.0;
    for (long j1 = 1; j1 <= N; ++j1) {
        const double A = var[static_cast<std::size_t>(j1)] + eps1;
        for (long j2 = 1; j2 <= N; ++j2) {
            const double B = var[static_cast<std::size_t>(j2)] + eps2;
            const double c0 = bridge ? static_cast<double>(j1) * static_cast<double>(j2) * h * h / T : 0.0;
            const double Q = A * B;
            double row = 0.0;
            for (long rho = -(N - j1); rho <= N - j2; ++rho) {
                const long lmin = std::max(0L, -rho);
                const long lmax = std::min(N - j1, N - j2 - rho);
                if (lmax < lmin) continue;
                const long overlap = std::max(0L, std::min(j1, rho + j2) - std::max(0L, rho));
                const double c = static_cast<double>(overlap) * h - c0;
                const double det = Q - c * c;
                if (det > 0.0) row += static_cast<double>(lmax - lmin + 1) / std::sqrt(det);
            }
            total += row;
        }
    }
    return h * h * h * h * total / (2.0 * M_PI);
}

// E[(I_ε − I_δ)²] = E I_ε² + E I_δ² − 2 E[I_ε I_δ] for the bridge (ordered).
struct CauchyGap {
    double value = 0.0;
    double abs_error = 0.0;
    double second_eps = 0.0;
    double second_delta = 0.0;
    double cross = 0.0;
};

inline CauchyGap cauchy_gap_detail(double T, double eps, double delta,
                                   const quad::Options& opt = {1e-10, 0.0, 18}) {
    if (!(eps > 0.0) || !(delta > 0.0)) throw InputError("cauchy_gap: regularizers must be positive");
    const double lo = std::min(eps, delta);
    const double hi = std::max(eps, delta);
    CauchyGap g;
    const auto a = second_moment_quadrature(T, eps, eps, ProcessKind::bridge, opt);
    const auto b = eps == delta ? a : second_moment_quadrature(T, delta, delta, ProcessKind::bridge, opt);
    const auto c = eps == delta ? a : second_moment_quadrature(T, lo, hi, ProcessKind::bridge, opt);
    g.second_eps = a.second_moment;
    g.second_delta = b.second_moment;
    g.cross = c.second_moment;
    g.abs_error = a.abs_error + b.abs_error + 2.0 * c.abs_error;
    g.value = g.second_eps + g.second_delta - 2.0 * g.cross;
    if (g.value < 0.0) {
        if (-g.value > g.abs_error + 1e-14 * g.second_eps)
            throw NumericError("cauchy_gap: negative L2 gap beyond quadrature error", -g.value);
        g.value = 0.0;
    }
    return g;
}

[[nodiscard]] inline double cauchy_gap(double T, double eps, double delta) {
    return cauchy_gap_detail(T, eps, delta).value;
}

}  // namespace silt
