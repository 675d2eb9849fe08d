#include "silt/gaussian_paths.hpp"
#include "silt/monte_carlo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

using namespace silt;

TEST(TimeGrid, RejectsInvalidGrids) {
    EXPECT_THROW(TimeGrid(1.0, {0.0}), InputError);
    EXPECT_THROW(TimeGrid(1.0, {0.1, 1.0}), InputError);
    EXPECT_THROW(TimeGrid(1.0, {0.0, 0.5, 0.9}), InputError);
    EXPECT_THROW(TimeGrid(1.0, {0.0, 0.5, 0.5, 1.0}), InputError);
    EXPECT_THROW(TimeGrid(-1.0, {0.0, -1.0}), InputError);
    EXPECT_THROW(TimeGrid::uniform(1.0, 0), InputError);
}

TEST(TimeGrid, UniformStep) {
    const auto g = TimeGrid::uniform(2.0, 8);
    EXPECT_EQ(g.size(), 9u);
    EXPECT_DOUBLE_EQ(g.uniform_step(), 0.25);
    EXPECT_EQ(g[8], 2.0);
    const TimeGrid nu(1.0, {0.0, 0.1, 1.0});
    EXPECT_FALSE(nu.is_uniform());
    EXPECT_THROW((void)nu.uniform_step(), InputError);
}

TEST(SampleMotion, StartsAtZeroOnTwoPointGrid) {
    RngStream rng(5);
    const auto p = sample_motion(TimeGrid(3.0, {0.0, 3.0}), rng);
    EXPECT_EQ(p.values[0], 0.0);
    EXPECT_EQ(p.values.size(), 2u);
}

TEST(SampleMotion, SameSeedSamePath) {
    const auto g = TimeGrid::uniform(1.0, 64);
    RngStream a(42, 3), b(42, 3), c(42, 4);
    const auto pa = sample_motion(g, a), pb = sample_motion(g, b), pc = sample_motion(g, c);
    EXPECT_EQ(pa.values, pb.values);
    EXPECT_NE(pa.values, pc.values);
}

TEST(SampleMotion, IncrementVarianceMatchesStep) {
    const TimeGrid g(1.0, {0.0, 0.1, 0.35, 1.0});
    const auto m = sharded_moments(
        100000, 3, ShardPlan{17}, [] { return 0; },
        [&](RngStream& rng, std::span<double> out, int&) {
            const auto p = sample_motion(g, rng);
            for (std::size_t k = 0; k < 3; ++k) {
                const double d = p.values[k + 1] - p.values[k];
                out[k] = d * d;
            }
        });
    for (std::size_t k = 0; k < 3; ++k) {
        const double dt = g[k + 1] - g[k];
        EXPECT_LE(std::abs(m[k].mean() - dt), 3.0 * m[k].std_error()) << "increment " << k;
    }
}

TEST(SampleBridge, PinnedEndpoints) {
    RngStream rng(9);
    const auto p = sample_bridge(TimeGrid::uniform(2.0, 33), 0.0, 0.0, rng);
    EXPECT_EQ(p.values.front(), 0.0);
    EXPECT_EQ(p.values.back(), 0.0);
    RngStream rng2(9);
    const auto q = sample_bridge(TimeGrid::uniform(2.0, 33), 1.5, -0.5, rng2);
    EXPECT_EQ(q.values.front(), 1.5);
    EXPECT_EQ(q.values.back(), -0.5);
    EXPECT_EQ(q.kind, ProcessKind::bridge);
}

TEST(SampleBridge, PivotsTheMotionPath) {
    const auto g = TimeGrid::uniform(1.0, 16);
    RngStream a(3), b(3);
    const auto motion = sample_motion(g, a);
    const auto bridge = sample_bridge(g, 0.0, 0.0, b);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double expect = motion.values[k] - g[k] * motion.values.back();
        EXPECT_NEAR(bridge.values[k], expect, 1e-15);
    }
}

TEST(SampleBridge, EmpiricalMeanAndCovariance) {
    const auto g = TimeGrid::uniform(1.0, 20);
    const double a = 1.0, b = -2.0;
    const std::size_t i = 5, j = 13;  // t = 0.25, 0.65
    const auto m = sharded_moments(
        100000, 3, ShardPlan{23}, [] { return 0; },
        [&](RngStream& rng, std::span<double> out, int&) {
            const auto p = sample_bridge(g, a, b, rng);
            const double xi = p.values[i] - (a * (1 - g[i]) + b * g[i]);
            const double xj = p.values[j] - (a * (1 - g[j]) + b * g[j]);
            out[0] = p.values[i];
            out[1] = xi * xj;
            out[2] = xi * xi;
        });
    EXPECT_LE(std::abs(m[0].mean() - (a * 0.75 + b * 0.25)), 3.0 * m[0].std_error());
    EXPECT_LE(std::abs(m[1].mean() - (0.25 - 0.25 * 0.65)), 3.0 * m[1].std_error());
    EXPECT_LE(std::abs(m[2].mean() - 0.25 * 0.75), 3.0 * m[2].std_error());
}

TEST(BridgeCov, Examples) {
    EXPECT_EQ(bridge_cov(0.0, 0.7, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(bridge_cov(0.25, 0.5, 1.0), 0.125);
    EXPECT_DOUBLE_EQ(bridge_cov(0.5, 0.5, 1.0), 0.25);
    EXPECT_DOUBLE_EQ(bridge_cov(0.3, 0.3, 2.0), 0.3 * 1.7 / 2.0);
    EXPECT_DOUBLE_EQ(bridge_cov(0.6, 0.2, 1.0), bridge_cov(0.2, 0.6, 1.0));
    EXPECT_THROW((void)bridge_cov(-0.1, 0.5, 1.0), InputError);
    EXPECT_THROW((void)bridge_cov(0.1, 1.5, 1.0), InputError);
}

TEST(BridgeMean, Examples) {
    EXPECT_EQ(bridge_mean(0.0, 2.0, 3.0, 4.0), 3.0);
    EXPECT_EQ(bridge_mean(2.0, 2.0, 3.0, 4.0), 4.0);
    EXPECT_DOUBLE_EQ(bridge_mean(0.5, 1.0, 0.0, 2.0), 1.0);
    EXPECT_THROW((void)bridge_mean(1.5, 1.0, 0.0, 0.0), InputError);
}

TEST(IncrementVariance, MotionAndBridge) {
    EXPECT_DOUBLE_EQ(increment_variance(ProcessKind::motion, 0.3, 1.0), 0.3);
    EXPECT_DOUBLE_EQ(increment_variance(ProcessKind::bridge, 0.3, 1.0), 0.3 * 0.7);
    EXPECT_DOUBLE_EQ(increment_variance(ProcessKind::bridge, 1.0, 1.0), 0.0);
}

TEST(ShardedMoments, IndependentOfWorkerCount) {
    auto run = [] {
        return sharded_moments(
            5000, 1, ShardPlan{77, 300}, [] { return 0; },
            [](RngStream& rng, std::span<double> out, int&) { out[0] = rng.normal(); });
    };
    setenv("SILT_WORKERS", "1", 1);
    const auto one = run();
    setenv("SILT_WORKERS", "4", 1);
    const auto four = run();
    unsetenv("SILT_WORKERS");
    EXPECT_EQ(one[0].sum, four[0].sum);
    EXPECT_EQ(one[0].sum_sq, four[0].sum_sq);
    EXPECT_EQ(one[0].count, 5000u);
}

TEST(ShardedMoments, PropagatesWorkerExceptions) {
    setenv("SILT_WORKERS", "3", 1);
    auto bad = [] {
        return sharded_moments(
            1000, 1, ShardPlan{1, 100}, [] { return 0; },
            [](RngStream&, std::span<double>, int&) { throw NumericError("boom", 1.0); });
    };
    EXPECT_THROW(bad(), NumericError);
    unsetenv("SILT_WORKERS");
    EXPECT_THROW(sharded_moments(
                     0, 1, ShardPlan{}, [] { return 0; }, [](RngStream&, std::span<double>, int&) {}),
                 InputError);
}
