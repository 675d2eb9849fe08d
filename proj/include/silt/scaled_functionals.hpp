#pragma once

// Complex-scaled exponentials E[exp(z I_ε)] of the bridge SILT, the trace
// propagator K(x0, T; x0, 0) = (2πiT)^{−1/2} E[exp(−g i^{−1/2} I)] and its
// Fourier transform in T (density of states).

#include "silt/errors.hpp"
#include "silt/gaussian_paths.hpp"
#include "silt/monte_carlo.hpp"
#include "silt/quadrature.hpp"
#include "silt/silt_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace silt {

using cplx = std::complex<double>;

struct CouplingParams {
    double g = 0.0;   // k / 2ħ
    double T = 1.0;
    double x0 = 0.0;
    double xT = 0.0;

    void validate() const {
        if (!(g >= 0.0) || !std::isfinite(g)) throw InputError("coupling g must be >= 0");
        if (!(T > 0.0) || !std::isfinite(T)) throw InputError("duration T must be positive");
        if (!std::isfinite(x0) || !std::isfinite(xT)) throw InputError("endpoints must be finite");
    }
};

// z = −g i^{−1/2} with Re(i^{−1/2}) >= 0, i.e. i^{−1/2} = e^{−iπ/4}.
[[nodiscard]] inline cplx scaled_exponent(double g) {
    if (!(g >= 0.0)) throw InputError("scaled_exponent: g must be >= 0");
    const double c = g / std::sqrt(2.0);
    return {0.0 - c, c};
}

struct ComplexEstimate {
    cplx value{0.0, 0.0};
    double std_error = 0.0;
    std::size_t n_samples = 0;
    double epsilon = 0.0;
    std::size_t n_grid = 0;
    double max_modulus = 0.0;            // largest |exp(z I)| over all summands
    std::size_t modulus_violations = 0;  // summands with |exp(z I)| > 1
};

struct ExpSiltSpec {
    CouplingParams params;
    std::vector<double> eps;
    std::size_t grid_n = 256;
    std::size_t n_samples = 10000;
    SiltConvention convention = SiltConvention::full_square;
    ShardPlan shards{};
    // Replaces z = scaled_exponent(g) when set (used for real-z checks).
    std::optional<cplx> z_override;
};

// Summand modulus is counted as a violation above 1 + 4 ulp.
inline constexpr double modulus_slack = 4.0 * std::numeric_limits<double>::epsilon();

// One pass over bridge paths pinned at a = b = x0; every ε in spec.eps is
// evaluated on the same paths.
inline std::vector<ComplexEstimate> exp_silt_mc(const ExpSiltSpec& spec) {
    spec.params.validate();
    detail::check_eps_list(spec.eps);
    const cplx z = spec.z_override ? *spec.z_override : scaled_exponent(spec.params.g);
    const TimeGrid grid = TimeGrid::uniform(spec.params.T, spec.grid_n);
    const std::size_t ne = spec.eps.size();
    struct State {
        detail::PairSumWorkspace ws;
    };
    auto m = sharded_moments(
        spec.n_samples, 4 * ne, spec.shards, [] { return State{}; },
        [&](RngStream& rng, std::span<double> out, State& st) {
            const PathSample path = sample_bridge(grid, spec.params.x0, spec.params.x0, rng);
            const auto I = silt_pair_sums(path, spec.eps, spec.convention, &st.ws);
            for (std::size_t e = 0; e < ne; ++e) {
                const cplx w = std::exp(z * I[e]);
                const double mod = std::abs(w);
                out[4 * e] = w.real();
                out[4 * e + 1] = w.imag();
                out[4 * e + 2] = mod;
                out[4 * e + 3] = mod > 1.0 + modulus_slack ? 1.0 : 0.0;
            }
        });
    std::vector<ComplexEstimate> out(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        auto& r = out[e];
        const auto& re = m[4 * e];
        const auto& im = m[4 * e + 1];
        r.value = {re.mean(), im.mean()};
        r.std_error = std::sqrt(re.std_error() * re.std_error() + im.std_error() * im.std_error());
        r.n_samples = spec.n_samples;
        r.epsilon = spec.eps[e];
        r.n_grid = spec.grid_n;
        r.max_modulus = m[4 * e + 2].max;
        r.modulus_violations = static_cast<std::size_t>(std::llround(m[4 * e + 3].sum));
    }
    return out;
}

[[nodiscard]] inline ComplexEstimate exp_silt_mc(const CouplingParams& params, double eps, std::size_t grid_n,
                                                 std::size_t n_samples, std::uint64_t seed,
                                                 SiltConvention convention = SiltConvention::full_square) {
    ExpSiltSpec spec{params, {eps}, grid_n, n_samples, convention, ShardPlan{seed}, std::nullopt};
    return exp_silt_mc(spec).front();
}

// (2πiT)^{−1/2} exp(−(xT − x0)²/2iT), principal branch.
[[nodiscard]] inline cplx free_propagator(double T, double x0 = 0.0, double xT = 0.0) {
    if (!(T > 0.0)) throw InputError("free_propagator: T must be positive");
    const cplx iT{0.0, T};
    const double dx = xT - x0;
    const cplx pre = 1.0 / std::sqrt(2.0 * M_PI * iT);
    return dx == 0.0 ? pre : pre * std::exp(-(dx * dx) / (2.0 * iT));
}

struct PropagatorSpec {
    CouplingParams params;
    std::vector<double> eps_schedule{1e-1, 1e-2, 1e-3};
    std::size_t grid_n = 256;
    std::size_t n_samples = 10000;
    ShardPlan shards{};
    SiltConvention convention = SiltConvention::full_square;
    double rate_exponent = 0.5;  // assumed E_ε − E_0 ∝ ε^p in the extrapolation
};

struct PropagatorResult {
    cplx prefactor{0.0, 0.0};
    std::vector<ComplexEstimate> expectation;  // E[exp(z I_ε)] per schedule entry
    std::vector<cplx> raw;                     // prefactor × expectation, per ε
    std::vector<double> gaps;                  // |raw[j+1] − raw[j]|
    cplx value{0.0, 0.0};                      // extrapolated to ε → 0
    double extrapolation_change = 0.0;         // |value − raw.back()|
    double std_error = 0.0;                    // MC error of raw.back(), times |prefactor|
};

// Two-point Richardson step on the last two schedule entries:
// K_0 ≈ K_last + (K_last − K_prev)/(ρ^p − 1), ρ = ε_prev/ε_last.
inline PropagatorResult propagator(const PropagatorSpec& spec) {
    spec.params.validate();
    if (spec.params.xT != spec.params.x0)
        throw UnsupportedError("propagator: only xT = x0 is supported");
    if (spec.eps_schedule.empty()) throw InputError("propagator: empty eps schedule");
    for (std::size_t j = 1; j < spec.eps_schedule.size(); ++j)
        if (!(spec.eps_schedule[j] < spec.eps_schedule[j - 1]))
            throw InputError("propagator: eps schedule must be strictly decreasing");
    if (!(spec.rate_exponent > 0.0)) throw InputError("propagator: rate exponent must be positive");

    PropagatorResult r;
    r.prefactor = free_propagator(spec.params.T);
    ExpSiltSpec es{spec.params, spec.eps_schedule, spec.grid_n, spec.n_samples,
                   spec.convention, spec.shards, std::nullopt};
    r.expectation = exp_silt_mc(es);
    for (const auto& e : r.expectation) r.raw.push_back(r.prefactor * e.value);
    for (std::size_t j = 1; j < r.raw.size(); ++j) r.gaps.push_back(std::abs(r.raw[j] - r.raw[j - 1]));
    r.value = r.raw.back();
    if (r.raw.size() >= 2) {
        const std::size_t k = r.raw.size() - 1;
        const double rho = spec.eps_schedule[k - 1] / spec.eps_schedule[k];
        r.value += (r.raw[k] - r.raw[k - 1]) / (std::pow(rho, spec.rate_exponent) - 1.0);
    }
    r.extrapolation_change = std::abs(r.value - r.raw.back());
    r.std_error = std::abs(r.prefactor) * r.expectation.back().std_error;
    return r;
}

// ---------------------------------------------------------------------------
// Density of states ρ(E) = (1/π) Re ∫_0^∞ w(T) K(T) e^{iET} dT.

struct DosOptions {
    double damping_time = 0.0;  // τ in w(T) = exp(−(T/τ)²); 0 selects T_max / 3
};

struct DosMetadata {
    std::string normalization = "rho(E) = (1/pi) Re int_0^inf w(T) K(T) exp(iET) dT, hbar = m = 1";
    std::string damping = "w(T) = exp(-(T/tau)^2)";
    std::string rule = "product trapezoid in T with exact T^(-1/2) weights, Richardson step from half resolution; node T=0 by quadratic extrapolation of K(T) sqrt(T)";
    double tau = 0.0;
    double dT = 0.0;
    double T_max = 0.0;
    double nyquist_energy = 0.0;  // π / dT
};

struct DosResult {
    std::vector<double> energy;
    std::vector<double> density;
    std::vector<double> quadrature_error;  // |fine − coarse| / 3π, bounds the extrapolated value
    double truncation_bound = 0.0;         // bound on the discarded tail T > T_max
    DosMetadata metadata;
};

namespace detail {

// ∫ over T ∈ [0, T_M] of T^{−1/2} f(T) with f piecewise linear between nodes
// 0, h, ..., M h; `f0` is f(0).
inline cplx product_trapezoid(cplx f0, std::span<const cplx> f, double h, std::size_t stride) {
    const double H = h * static_cast<double>(stride);
    cplx acc{0.0, 0.0};
    double a = 0.0;
    cplx fa = f0;
    for (std::size_t j = stride - 1; j < f.size(); j += stride) {
        const double b = h * static_cast<double>(j + 1);
        const double sa = std::sqrt(a), sb = std::sqrt(b);
        const double I0 = 2.0 * (sb - sa);
        const double I1 = (2.0 / 3.0) * (b * sb - a * sa);
        acc += fa * ((b * I0 - I1) / H) + f[j] * ((I1 - a * I0) / H);
        a = b;
        fa = f[j];
    }
    return acc;
}

}  // namespace detail

// T_grid must be uniform with T_grid[0] = spacing (nodes h, 2h, ..., M h);
// K holds the trace propagator at those nodes. Energies with |E| >= π/h are
// rejected.
inline DosResult density_of_states(std::span<const double> T_grid, std::span<const cplx> K,
                                   std::span<const double> energy_grid, const DosOptions& opt = {}) {
    if (T_grid.size() < 4) throw InputError("density_of_states: need at least 4 T samples");
    if (T_grid.size() != K.size()) throw InputError("density_of_states: T grid and K sizes differ");
    if (energy_grid.empty()) throw InputError("density_of_states: empty energy grid");
    const double h = T_grid[0];
    if (!(h > 0.0)) throw InputError("density_of_states: T grid must start at its spacing > 0");
    for (std::size_t j = 0; j < T_grid.size(); ++j)
        if (std::abs(T_grid[j] - h * static_cast<double>(j + 1)) > 1e-9 * h * static_cast<double>(j + 1))
            throw InputError("density_of_states: T grid must be uniform h, 2h, ..., Mh");
    if (T_grid.size() % 2 != 0)
        throw InputError("density_of_states: need an even number of T samples for the error estimate");

    DosResult res;
    auto& md = res.metadata;
    md.dT = h;
    md.T_max = T_grid.back();
    md.tau = opt.damping_time > 0.0 ? opt.damping_time : md.T_max / 3.0;
    md.nyquist_energy = M_PI / h;
    for (double E : energy_grid) {
        if (!std::isfinite(E) || std::abs(E) >= md.nyquist_energy)
            throw InputError("density_of_states: energy " + std::to_string(E) +
                             " not resolved by the T spacing (|E| must be < pi/dT)");
    }
    // |K(T)| <= (2πT)^{−1/2} for Re z <= 0, so the tail T > T_max is bounded by
    // (1/π)(2π T_max)^{−1/2} ∫_{T_max}^∞ e^{−(T/τ)²} dT.
    res.truncation_bound = (1.0 / M_PI) / std::sqrt(2.0 * M_PI * md.T_max) * md.tau * std::sqrt(M_PI) /
                           2.0 * std::erfc(md.T_max / md.tau);

    std::vector<cplx> f(K.size());
    for (double E : energy_grid) {
        for (std::size_t j = 0; j < K.size(); ++j) {
            const double T = T_grid[j];
            const double w = std::exp(-(T / md.tau) * (T / md.tau));
            f[j] = K[j] * std::sqrt(T) * w * std::exp(cplx{0.0, E * T});
        }
        // Keeps the transform linear in K.
        const cplx f0 = 3.0 * f[0] - 3.0 * f[1] + f[2];
        const cplx fine = detail::product_trapezoid(f0, f, h, 1);
        const cplx coarse = detail::product_trapezoid(f0, f, h, 2);
        res.energy.push_back(E);
        res.density.push_back((fine + (fine - coarse) / 3.0).real() / M_PI);
        res.quadrature_error.push_back(std::abs((fine - coarse).real()) / (3.0 * M_PI));
    }
    return res;
}

// Evaluates K on h, 2h, ..., T_max: exactly for g = 0, by `propagator`
// (with `base` supplying schedule, grid and samples) otherwise.
inline DosResult density_of_states(double x0, double g, std::span<const double> T_grid,
                                   std::span<const double> energy_grid, const DosOptions& opt = {},
                                   const PropagatorSpec& base = {}) {
    std::vector<cplx> K(T_grid.size());
    for (std::size_t j = 0; j < T_grid.size(); ++j) {
        if (g == 0.0) {
            K[j] = free_propagator(T_grid[j]);
        } else {
            PropagatorSpec s = base;
            s.params = CouplingParams{g, T_grid[j], x0, x0};
            s.shards.seed = base.shards.seed + j;
            K[j] = propagator(s).value;
        }
    }
    return density_of_states(T_grid, K, energy_grid, opt);
}

// Free trace transformed on the same damped window [0, T_max]:
// (1/π) Re ∫_0^{T_max} (2πiT)^{−1/2} e^{−(T/τ)²} e^{iET} dT, with T = s².
[[nodiscard]] inline double free_dos_window(double E, double T_max, double tau, double rel_tol = 1e-11) {
    if (!(T_max > 0.0) || !(tau > 0.0)) throw InputError("free_dos_window: T_max and tau must be positive");
    const cplx pre = free_propagator(1.0);
    auto f = [&](double s) {
        const double T = s * s;
        return (2.0 * pre * std::exp(cplx{-(T / tau) * (T / tau), E * T})).real();
    };
    // Pieces of roughly one oscillation each in T.
    const double S = std::sqrt(T_max);
    const auto pieces = static_cast<std::size_t>(std::clamp(std::abs(E) * T_max / M_PI, 8.0, 4096.0));
    double acc = 0.0;
    for (std::size_t k = 0; k < pieces; ++k) {
        const double a = S * std::sqrt(static_cast<double>(k) / static_cast<double>(pieces));
        const double b = S * std::sqrt(static_cast<double>(k + 1) / static_cast<double>(pieces));
        acc += quad::integrate(f, a, b, {rel_tol, 1e-16, 18}, "free_dos_window").value;
    }
    return acc / M_PI;
}

// Uniform nodes h, 2h, ..., T_max with h = T_max / count.
[[nodiscard]] inline std::vector<double> dos_time_grid(double T_max, std::size_t count) {
    if (!(T_max > 0.0) || count < 4) throw InputError("dos_time_grid: need T_max > 0 and count >= 4");
    std::vector<double> t(count);
    for (std::size_t j = 0; j < count; ++j)
        t[j] = T_max * static_cast<double>(j + 1) / static_cast<double>(count);
    return t;
}

}  // namespace silt
