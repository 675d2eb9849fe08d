#pragma once

// Executes one experiment configuration: a results table, a list of checks
// against independent oracles, and a JSON summary for the manifest.

#include "silt/experiment/chaos_checks.hpp"
#include "silt/experiment/check.hpp"
#include "silt/experiment/config.hpp"
#include "silt/experiment/csv.hpp"
#include "silt/scaled_functionals.hpp"
#include "silt/second_moment.hpp"
#include "silt/silt_core.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace silt::experiment {

struct Outcome {
    ResultTable table;
    std::vector<CheckResult> checks;
    nlohmann::json summary = nlohmann::json::object();

    [[nodiscard]] bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
    }
};

namespace detail {

inline std::string tag(const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%g", key, v);
    return buf;
}

inline SiltMcSpec mc_spec(const ExperimentConfig& c) {
    if (c.a != c.b) throw UnsupportedError("moment oracles assume equal bridge endpoints (a = b)");
    SiltMcSpec s;
    s.T = c.T;
    s.process = c.process;
    s.start = c.a;
    s.end = c.b;
    s.eps = c.eps;
    s.grid_n = c.grid_n;
    s.n_samples = c.samples;
    s.convention = c.effective_convention();
    s.shards = ShardPlan{c.seed, c.shard_size};
    return s;
}

inline Outcome run_silt_mean(const ExperimentConfig& c) {
    const auto spec = mc_spec(c);
    const auto mc = silt_moments_mc(spec);
    Outcome o{ResultTable(to_string(c.kind), {"eps", "grid_n", "samples", "mc_mean", "std_error", "discrete_mean",
                                              "quadrature_mean", "discretization_allowance", "z_discrete",
                                              "z_quadrature", "status"}),
              {},
              {}};
    const quad::Options qo{c.rel_tol, 0.0, 18};
    for (std::size_t e = 0; e < c.eps.size(); ++e) {
        const double eps = c.eps[e];
        const double m = mc[e].mean.value, se = mc[e].mean.std_error;
        const double disc = mean_silt_discrete(c.T, c.grid_n, eps, c.process, spec.convention);
        const double quad = mean_silt_quadrature(c.T, eps, c.process, spec.convention, qo);
        const double allow = std::abs(disc - quad);
        auto strict = make_check("mean-vs-discrete " + tag("eps", eps), std::abs(m - disc), c.z_max * se);
        auto cont = make_check("mean-vs-quadrature " + tag("eps", eps), std::abs(m - quad), c.z_max * se + allow,
                               "tolerance includes the grid discretization allowance");
        o.table.add(ResultTable::Row{}
                        .num(eps)
                        .num(static_cast<double>(c.grid_n))
                        .num(static_cast<double>(c.samples))
                        .num(m)
                        .num(se)
                        .num(disc)
                        .num(quad)
                        .num(allow)
                        .num(se > 0 ? (m - disc) / se : 0.0)
                        .num(se > 0 ? (m - quad) / se : 0.0)
                        .flag(strict.pass && cont.pass));
        o.checks.push_back(std::move(strict));
        o.checks.push_back(std::move(cont));
    }
    return o;
}

inline Outcome run_silt_second_moment(const ExperimentConfig& c) {
    const auto spec = mc_spec(c);
    const auto mc = silt_moments_mc(spec);
    const double f = convention_factor(spec.convention);
    Outcome o{ResultTable(to_string(c.kind), {"eps", "grid_n", "samples", "mc_second_moment", "std_error",
                                              "discrete_second_moment", "quadrature_second_moment",
                                              "quadrature_error", "discretization_allowance", "z_discrete",
                                              "z_quadrature", "status"}),
              {},
              {}};
    const quad::Options qo{c.rel_tol, 0.0, 18};
    for (std::size_t e = 0; e < c.eps.size(); ++e) {
        const double eps = c.eps[e];
        const double m = mc[e].second_moment, se = mc[e].second_moment_std_error;
        const double disc = f * f * second_moment_discrete(c.T, c.grid_n, eps, eps, c.process);
        const auto q = second_moment_quadrature(c.T, eps, eps, c.process, qo, false);
        const double quad = f * f * q.second_moment, qerr = f * f * q.abs_error;
        const double allow = std::abs(disc - quad);
        auto strict = make_check("second-moment-vs-discrete " + tag("eps", eps), std::abs(m - disc), c.z_max * se);
        auto cont = make_check("second-moment-vs-quadrature " + tag("eps", eps), std::abs(m - quad),
                               c.z_max * se + allow + qerr, "tolerance includes the grid discretization allowance");
        auto conv = make_check("second-moment-quadrature-converged " + tag("eps", eps), q.converged() ? 0.0 : 1.0,
                               0.0);
        o.table.add(ResultTable::Row{}
                        .num(eps)
                        .num(static_cast<double>(c.grid_n))
                        .num(static_cast<double>(c.samples))
                        .num(m)
                        .num(se)
                        .num(disc)
                        .num(quad)
                        .num(qerr)
                        .num(allow)
                        .num(se > 0 ? (m - disc) / se : 0.0)
                        .num(se > 0 ? (m - quad) / se : 0.0)
                        .flag(strict.pass && cont.pass && conv.pass));
        o.checks.push_back(std::move(strict));
        o.checks.push_back(std::move(cont));
        o.checks.push_back(std::move(conv));
    }
    return o;
}

inline Outcome run_silt_convergence(const ExperimentConfig& c) {
    if (c.process != ProcessKind::bridge) throw UnsupportedError("silt-convergence: only the bridge is supported");
    if (c.eps.size() < 2) throw InputError("silt-convergence: need at least two eps values");
    std::vector<double> eps = c.eps;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    Outcome o{ResultTable(to_string(c.kind), {"eps", "delta", "second_moment_eps", "second_moment_delta", "cross",
                                              "gap", "gap_error", "ratio"}),
              {},
              {}};
    const quad::Options qo{c.rel_tol, 0.0, 18};
    std::vector<double> gaps;
    double worst_err = 0.0;
    for (std::size_t k = 0; k + 1 < eps.size(); ++k) {
        const auto g = cauchy_gap_detail(c.T, eps[k], eps[k + 1], qo);
        const double ratio = gaps.empty() ? 0.0 : g.value / gaps.back();
        gaps.push_back(g.value);
        worst_err = std::max(worst_err, g.abs_error / std::max(g.value, 1e-300));
        o.table.add(ResultTable::Row{}
                        .num(eps[k])
                        .num(eps[k + 1])
                        .num(g.second_eps)
                        .num(g.second_delta)
                        .num(g.cross)
                        .num(g.value)
                        .num(g.abs_error)
                        .num(ratio));
    }
    std::size_t increases = 0;
    for (std::size_t k = 1; k < gaps.size(); ++k)
        if (!(gaps[k] < gaps[k - 1])) ++increases;
    o.checks.push_back(make_check("gaps-strictly-decreasing", static_cast<double>(increases), 0.0,
                                  std::to_string(gaps.size()) + " consecutive gaps"));
    o.checks.push_back(make_check("gap-relative-quadrature-error", worst_err, 1e-3));
    o.summary["gaps"] = gaps;
    return o;
}

inline Outcome run_exp_silt(const ExperimentConfig& c) {
    if (c.process != ProcessKind::bridge) throw UnsupportedError("exp-silt: only the bridge is supported");
    if (c.a != c.b) throw UnsupportedError("exp-silt: requires a = b");
    const auto conv = c.effective_convention();
    Outcome o{ResultTable(to_string(c.kind), {"g", "eps", "z_re", "z_im", "value_re", "value_im", "std_error",
                                              "modulus", "max_summand_modulus", "modulus_violations",
                                              "first_order_re", "first_order_im"}),
              {},
              {}};
    for (std::size_t j = 0; j < c.g.size(); ++j) {
        const double g = c.g[j];
        ExpSiltSpec spec{CouplingParams{g, c.T, c.a, c.a}, c.eps, c.grid_n, c.samples, conv,
                         ShardPlan{c.seed + j, c.shard_size}, std::nullopt};
        const auto r = exp_silt_mc(spec);
        const cplx z = scaled_exponent(g);
        std::size_t violations = 0;
        double worst_mod = 0.0;
        for (const auto& e : r) {
            const cplx first = 1.0 + z * mean_silt_quadrature(c.T, e.epsilon, ProcessKind::bridge, conv);
            o.table.add(ResultTable::Row{}
                            .num(g)
                            .num(e.epsilon)
                            .num(z)
                            .num(e.value)
                            .num(e.std_error)
                            .num(std::abs(e.value))
                            .num(e.max_modulus)
                            .num(static_cast<double>(e.modulus_violations))
                            .num(first));
            violations += e.modulus_violations;
            worst_mod = std::max(worst_mod, std::abs(e.value) - 1.0);
        }
        o.checks.push_back(make_check("summand-modulus-bound " + tag("g", g), static_cast<double>(violations), 0.0,
                                      "count of |exp(zI)| > 1"));
        o.checks.push_back(make_check("expectation-modulus-bound " + tag("g", g), std::max(0.0, worst_mod), 1e-12));
    }
    return o;
}

inline PropagatorSpec propagator_base(const ExperimentConfig& c) {
    PropagatorSpec s;
    s.eps_schedule = c.eps;
    std::sort(s.eps_schedule.begin(), s.eps_schedule.end(), std::greater<>());
    s.grid_n = c.grid_n;
    s.n_samples = c.samples;
    s.shards = ShardPlan{c.seed, c.shard_size};
    s.convention = c.effective_convention();
    return s;
}

inline Outcome run_propagator(const ExperimentConfig& c) {
    if (c.process != ProcessKind::bridge) throw UnsupportedError("propagator: only the bridge is supported");
    Outcome o{ResultTable(to_string(c.kind), {"g", "stage", "eps", "K_re", "K_im", "std_error", "free_re", "free_im",
                                              "modulus_ratio"}),
              {},
              {}};
    const PropagatorSpec base = propagator_base(c);
    nlohmann::json per_g = nlohmann::json::array();
    for (std::size_t j = 0; j < c.g.size(); ++j) {
        const double g = c.g[j];
        PropagatorSpec s = base;
        s.params = CouplingParams{g, c.T, c.x0, c.x0};
        s.shards.seed = c.seed + j;
        const auto r = propagator(s);
        const cplx K0 = free_propagator(c.T);
        double worst_ratio = 0.0;
        for (std::size_t k = 0; k < r.raw.size(); ++k) {
            const double ratio = std::abs(r.raw[k]) / std::abs(K0);
            worst_ratio = std::max(worst_ratio, ratio);
            o.table.add(ResultTable::Row{}
                            .num(g)
                            .text("raw")
                            .num(s.eps_schedule[k])
                            .num(r.raw[k])
                            .num(std::abs(r.prefactor) * r.expectation[k].std_error)
                            .num(K0)
                            .num(ratio));
        }
        o.table.add(ResultTable::Row{}
                        .num(g)
                        .text("extrapolated")
                        .num(0.0)
                        .num(r.value)
                        .num(r.std_error)
                        .num(K0)
                        .num(std::abs(r.value) / std::abs(K0)));
        o.checks.push_back(make_check("raw-modulus-within-free " + tag("g", g), std::max(0.0, worst_ratio - 1.0),
                                      1e-12));
        if (g == 0.0)
            o.checks.push_back(make_check("free-limit-exact", std::abs(r.value - K0) / std::abs(K0), 1e-15));
        per_g.push_back({{"g", g},
                         {"gaps", r.gaps},
                         {"extrapolation_change", r.extrapolation_change},
                         {"std_error", r.std_error},
                         {"rate_exponent", s.rate_exponent}});
    }
    o.summary["extrapolation"] = per_g;
    return o;
}

inline Outcome run_dos(const ExperimentConfig& c) {
    if (c.process != ProcessKind::bridge) throw UnsupportedError("dos: only the bridge is supported");
    if (c.dos_T_count % 2 != 0) throw InputError("dos: T_count must be even");
    const auto T_grid = dos_time_grid(c.dos_T_max, c.dos_T_count);
    const DosOptions opt{c.damping_time};
    const PropagatorSpec base = propagator_base(c);
    Outcome o{ResultTable(to_string(c.kind),
                          {"g", "E", "rho", "quadrature_error", "free_window", "free_infinite"}),
              {},
              {}};
    nlohmann::json meta;
    for (std::size_t j = 0; j < c.g.size(); ++j) {
        const double g = c.g[j];
        PropagatorSpec b = base;
        b.shards.seed = c.seed + 7919 * j;
        const auto r = density_of_states(c.x0, g, T_grid, c.energies, opt, b);
        double worst = 0.0;
        for (std::size_t i = 0; i < r.energy.size(); ++i) {
            const double E = r.energy[i];
            const double win = free_dos_window(E, r.metadata.T_max, r.metadata.tau);
            const double inf = E > 0.0   ? 1.0 / (M_PI * std::sqrt(2.0 * E))
                               : E < 0.0 ? 0.0
                                         : std::numeric_limits<double>::infinity();
            o.table.add(ResultTable::Row{}.num(g).num(E).num(r.density[i]).num(r.quadrature_error[i]).num(win).num(inf));
            if (g == 0.0) worst = std::max(worst, std::abs(r.density[i] - win) - r.quadrature_error[i]);
        }
        if (g == 0.0)
            o.checks.push_back(make_check("free-dos-matches-window", std::max(0.0, worst), 0.0,
                                          "|rho - window| minus the quadrature error estimate"));
        meta = {{"normalization", r.metadata.normalization},
                {"damping", r.metadata.damping},
                {"rule", r.metadata.rule},
                {"tau", r.metadata.tau},
                {"dT", r.metadata.dT},
                {"T_max", r.metadata.T_max},
                {"nyquist_energy", r.metadata.nyquist_energy},
                {"truncation_bound", r.truncation_bound}};
    }
    o.summary["dos"] = meta;
    return o;
}

inline Outcome run_chaos_verify(const ExperimentConfig& c) {
    Outcome o{ResultTable(to_string(c.kind), {"check", "value", "tolerance", "status"}), {}, {}};
    o.checks = run_chaos_checks(c.seed, c.trials, c.z_max, c.samples);
    for (const auto& ch : o.checks)
        o.table.add(ResultTable::Row{}.text(ch.name).num(ch.value).num(ch.tolerance).flag(ch.pass));
    return o;
}

}  // namespace detail

inline Outcome run_experiment(const ExperimentConfig& c) {
    switch (c.kind) {
        case ExperimentKind::silt_mean: return detail::run_silt_mean(c);
        case ExperimentKind::silt_second_moment: return detail::run_silt_second_moment(c);
        case ExperimentKind::silt_convergence: return detail::run_silt_convergence(c);
        case ExperimentKind::exp_silt: return detail::run_exp_silt(c);
        case ExperimentKind::propagator: return detail::run_propagator(c);
        case ExperimentKind::dos: return detail::run_dos(c);
        case ExperimentKind::chaos_verify: return detail::run_chaos_verify(c);
    }
    throw InputError("run_experiment: unknown kind");
}

}  // namespace silt::experiment
