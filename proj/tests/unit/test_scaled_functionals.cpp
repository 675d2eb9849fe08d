#include "silt/scaled_functionals.hpp"
#include "silt/second_moment.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace silt;

TEST(ScaledExponent, Examples) {
    const cplx z1 = scaled_exponent(1.0);
    EXPECT_NEAR(z1.real(), -0.7071067811865476, 1e-15);
    EXPECT_NEAR(z1.imag(), 0.7071067811865476, 1e-15);
    const cplx z2 = scaled_exponent(std::sqrt(2.0));
    EXPECT_NEAR(z2.real(), -1.0, 1e-15);
    EXPECT_NEAR(z2.imag(), 1.0, 1e-15);
    EXPECT_FALSE(std::signbit(scaled_exponent(0.0).real()));
    EXPECT_THROW((void)scaled_exponent(-0.1), InputError);
}

TEST(ExpSilt, ZeroCouplingIsExactlyOne) {
    const auto r = exp_silt_mc(CouplingParams{0.0, 1.0}, 1e-2, 32, 500, 3);
    EXPECT_EQ(r.value, cplx(1.0, 0.0));
    EXPECT_EQ(r.std_error, 0.0);
    EXPECT_EQ(r.modulus_violations, 0u);
}

TEST(ExpSilt, BoundedModulus) {
    ExpSiltSpec s;
    s.params = CouplingParams{10.0, 1.0};
    s.eps = {1e-1, 1e-3};
    s.grid_n = 64;
    s.n_samples = 5000;
    for (const auto& r : exp_silt_mc(s)) {
        EXPECT_EQ(r.modulus_violations, 0u);
        EXPECT_LE(r.max_modulus, 1.0);
        EXPECT_LE(std::abs(r.value), 1.0 + 1e-12);
    }
}

TEST(ExpSilt, SmallCouplingMatchesMomentExpansion) {
    // E e^{zI} ≈ 1 + z E I + z² E I² / 2 with exact grid moments.
    const double g = 0.05, eps = 0.05;
    const std::size_t n = 32;
    const cplx z = scaled_exponent(g);
    ExpSiltSpec s;
    s.params = CouplingParams{g, 1.0};
    s.eps = {eps};
    s.grid_n = n;
    s.n_samples = 20000;
    s.shards.seed = 11;
    const auto r = exp_silt_mc(s).front();
    const double m1 = mean_silt_discrete(1.0, n, eps, ProcessKind::bridge, SiltConvention::full_square);
    const double m2 = 4.0 * second_moment_discrete(1.0, n, eps, eps);
    const cplx oracle = 1.0 + z * m1 + z * z * m2 / 2.0;
    const double az = std::abs(z);
    EXPECT_LE(std::abs(r.value - oracle), 3.0 * r.std_error + az * az * az);
}

TEST(ExpSilt, RealExponentOverride) {
    ExpSiltSpec s;
    s.params = CouplingParams{1.0, 1.0};
    s.eps = {0.1};
    s.grid_n = 16;
    s.n_samples = 2000;
    s.z_override = cplx{-0.5, 0.0};
    const auto r = exp_silt_mc(s).front();
    EXPECT_EQ(r.value.imag(), 0.0);
    EXPECT_LT(r.value.real(), 1.0);
    EXPECT_GT(r.value.real(), 0.0);
}

TEST(ExpSilt, Errors) {
    EXPECT_THROW((void)exp_silt_mc(CouplingParams{-1.0, 1.0}, 0.1, 8, 10, 1), InputError);
    EXPECT_THROW((void)exp_silt_mc(CouplingParams{1.0, 0.0}, 0.1, 8, 10, 1), InputError);
    EXPECT_THROW((void)exp_silt_mc(CouplingParams{1.0, 1.0}, 0.0, 8, 10, 1), InputError);
}

TEST(Propagator, FreeCaseIsExact) {
    PropagatorSpec s;
    s.params = CouplingParams{0.0, 2.0};
    s.grid_n = 16;
    s.n_samples = 100;
    const auto r = propagator(s);
    const cplx K0 = 1.0 / std::sqrt(cplx{0.0, 2.0 * M_PI * 2.0});
    EXPECT_EQ(r.value, K0);
    EXPECT_EQ(r.extrapolation_change, 0.0);
    for (double gap : r.gaps) EXPECT_EQ(gap, 0.0);
}

TEST(Propagator, FreePropagatorBranch) {
    const cplx K = free_propagator(1.0);
    EXPECT_NEAR(std::abs(K), 1.0 / std::sqrt(2.0 * M_PI), 1e-15);
    EXPECT_NEAR(std::arg(K), -M_PI / 4.0, 1e-15);
    const cplx Kx = free_propagator(1.0, 0.0, 1.0);
    EXPECT_NEAR(std::abs(Kx), std::abs(K), 1e-15);
}

TEST(Propagator, InteractingModulusBelowFree) {
    PropagatorSpec s;
    s.params = CouplingParams{1.0, 1.0};
    s.grid_n = 64;
    s.n_samples = 4000;
    const auto r = propagator(s);
    const double K0 = std::abs(free_propagator(1.0));
    for (const cplx& k : r.raw) EXPECT_LE(std::abs(k), K0 * (1.0 + 1e-12));
    EXPECT_EQ(r.gaps.size(), 2u);
}

TEST(Propagator, Errors) {
    PropagatorSpec s;
    s.params = CouplingParams{1.0, 1.0, 0.0, 0.5};
    EXPECT_THROW((void)propagator(s), UnsupportedError);
    s.params.xT = 0.0;
    s.eps_schedule = {1e-2, 1e-1};
    EXPECT_THROW((void)propagator(s), InputError);
    s.eps_schedule = {};
    EXPECT_THROW((void)propagator(s), InputError);
}

TEST(DensityOfStates, FreeCaseMatchesWindowTransform) {
    const double T_max = 12.0;
    const auto T = dos_time_grid(T_max, 512);
    const std::vector<double> E{-1.0, 0.25, 1.0, 3.0};
    const auto r = density_of_states(0.0, 0.0, T, E);
    for (std::size_t i = 0; i < E.size(); ++i) {
        const double ref = free_dos_window(E[i], T_max, r.metadata.tau);
        EXPECT_LE(std::abs(r.density[i] - ref), r.quadrature_error[i] + 1e-12) << E[i];
    }
}

TEST(DensityOfStates, FreeCaseApproachesInfiniteResult) {
    // Undamped free trace: ρ0(E) = (2π²E)^{−1/2} for E > 0, 0 for E < 0.
    const double E = 2.0;
    const double tau = 60.0;
    const double w = free_dos_window(E, 3.0 * tau, tau);
    EXPECT_NEAR(w, 1.0 / std::sqrt(2.0 * M_PI * M_PI * E), 0.01);
    EXPECT_NEAR(free_dos_window(-E, 3.0 * tau, tau), 0.0, 0.01);
}

TEST(DensityOfStates, LongerWindowWithinTruncationBound) {
    const double tau = 3.0;
    const std::vector<double> E{0.5, 2.0};
    DosOptions opt;
    opt.damping_time = tau;
    const auto a = density_of_states(0.0, 0.0, dos_time_grid(9.0, 720), E, opt);
    const auto b = density_of_states(0.0, 0.0, dos_time_grid(18.0, 1440), E, opt);
    for (std::size_t i = 0; i < E.size(); ++i)
        EXPECT_LE(std::abs(a.density[i] - b.density[i]),
                  a.truncation_bound + a.quadrature_error[i] + b.quadrature_error[i]);
}

TEST(DensityOfStates, ZeroInputGivesZero) {
    const auto T = dos_time_grid(8.0, 64);
    const std::vector<cplx> K(T.size(), cplx{0.0, 0.0});
    const auto r = density_of_states(T, K, std::vector<double>{-1.0, 0.0, 2.5});
    for (std::size_t i = 0; i < r.density.size(); ++i) {
        EXPECT_EQ(r.density[i], 0.0);
        EXPECT_EQ(r.quadrature_error[i], 0.0);
    }
}

TEST(DensityOfStates, Errors) {
    const auto T = dos_time_grid(8.0, 64);
    std::vector<cplx> K(T.size(), cplx{0.0, 0.0});
    const double nyquist = M_PI / T[0];
    EXPECT_THROW((void)density_of_states(T, K, std::vector<double>{nyquist}), InputError);
    EXPECT_THROW((void)density_of_states(T, K, std::vector<double>{}), InputError);
    EXPECT_THROW((void)density_of_states(std::span(T).first(63), std::span(K).first(63), std::vector<double>{0.0}),
                 InputError);
    std::vector<double> bad = T;
    bad[3] += 0.01;
    EXPECT_THROW((void)density_of_states(bad, K, std::vector<double>{0.0}), InputError);
    EXPECT_THROW((void)dos_time_grid(1.0, 3), InputError);
}
