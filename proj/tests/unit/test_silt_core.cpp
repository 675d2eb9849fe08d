#include "silt/local_time.hpp"
#include "silt/silt_core.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

using namespace silt;

namespace {

PathSample constant_path(std::size_t n, double T, double v) {
    return PathSample{TimeGrid::uniform(T, n), std::vector<double>(n + 1, v)};
}

PathSample linear_path(std::size_t n, double T) {
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = T * static_cast<double>(i) / static_cast<double>(n);
    return PathSample{TimeGrid::uniform(T, n), v};
}

// Brute-force double loop over all ordered pairs of left nodes.
double pair_sum_reference(const PathSample& p, double eps) {
    const std::size_t n = p.grid.intervals();
    const double h = p.grid.duration() / static_cast<double>(n);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < k; ++l) {
            const double d = p.values[k] - p.values[l];
            s += std::exp(-d * d / (2.0 * eps)) / std::sqrt(2.0 * M_PI * eps);
        }
    return h * h * s;
}

}  // namespace

TEST(HeatKernel, Examples) {
    EXPECT_NEAR(heat_kernel(0.0, 1.0), 0.3989422804014327, 1e-15);
    const double eps = 0.37;
    EXPECT_NEAR(heat_kernel(eps, eps), std::exp(-eps / 2.0) / std::sqrt(2.0 * M_PI * eps), 1e-15);
    EXPECT_THROW((void)heat_kernel(0.0, 0.0), InputError);
    EXPECT_THROW((void)heat_kernel(0.0, -1.0), InputError);
}

TEST(HeatKernel, IntegratesToOne) {
    boost::math::quadrature::tanh_sinh<double> q;
    for (double eps : {1e-3, 0.1, 4.0}) {
        const double s = std::sqrt(eps);
        const double I = q.integrate([&](double x) { return heat_kernel(x, eps); }, -40.0 * s, 40.0 * s);
        EXPECT_NEAR(I, 1.0, 1e-12) << eps;
    }
}

TEST(Convention, ParseAndFactor) {
    EXPECT_EQ(parse_convention("ordered"), SiltConvention::ordered);
    EXPECT_EQ(parse_convention("full-square"), SiltConvention::full_square);
    EXPECT_THROW(parse_convention("square"), InputError);
    EXPECT_EQ(convention_factor(SiltConvention::full_square), 2.0);
}

TEST(SiltPairSum, ConstantPathClosedForm) {
    for (std::size_t n : {4u, 17u, 100u}) {
        const double T = 1.5, eps = 0.02;
        const auto p = constant_path(n, T, 0.7);
        const double expect = (T * T / 2.0) * (1.0 - 1.0 / static_cast<double>(n)) / std::sqrt(2.0 * M_PI * eps);
        EXPECT_NEAR(silt_pair_sum(p, eps, SiltConvention::ordered), expect, 1e-12 * expect);
        EXPECT_EQ(silt_pair_sum(p, eps, SiltConvention::full_square),
                  2.0 * silt_pair_sum(p, eps, SiltConvention::ordered));
    }
}

TEST(SiltPairSum, MatchesBruteForce) {
    const auto g = TimeGrid::uniform(1.0, 200);
    RngStream rng(4);
    const auto p = sample_bridge(g, 0.0, 0.0, rng);
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const double ref = pair_sum_reference(p, eps);
        EXPECT_NEAR(silt_pair_sum(p, eps, SiltConvention::ordered), ref, 1e-12 * ref);
    }
    const std::vector<double> eps{1e-1, 1e-3};
    const auto both = silt_pair_sums(p, eps, SiltConvention::ordered);
    EXPECT_NEAR(both[1], pair_sum_reference(p, 1e-3), 1e-12 * both[1]);
}

TEST(SiltPairSum, NestedMatchesSubsampledPath) {
    const auto g = TimeGrid::uniform(1.0, 128);
    RngStream rng(6);
    const auto p = sample_bridge(g, 0.0, 0.0, rng);
    std::vector<double> half(65);
    for (std::size_t k = 0; k <= 64; ++k) half[k] = p.values[2 * k];
    const PathSample q{TimeGrid::uniform(1.0, 64), half};
    const std::vector<double> eps{0.1, 1e-3};
    const auto r = silt_pair_sums_nested(p, eps, SiltConvention::full_square);
    for (std::size_t e = 0; e < eps.size(); ++e) {
        EXPECT_NEAR(r.fine[e], silt_pair_sum(p, eps[e], SiltConvention::full_square), 1e-13 * r.fine[e]);
        EXPECT_NEAR(r.coarse[e], pair_sum_reference(q, eps[e]) * 2.0, 1e-12 * r.coarse[e]);
    }
    const PathSample odd{TimeGrid::uniform(1.0, 3), {0.0, 0.1, 0.2, 0.0}};
    EXPECT_THROW((void)silt_pair_sums_nested(odd, eps, SiltConvention::ordered), InputError);
}

TEST(SiltPairSum, LinearPathApproachesOne) {
    // Needs h << sqrt(eps): the excluded diagonal costs about h / sqrt(2 pi eps).
    const double v = silt_pair_sum(linear_path(8192, 1.0), 1e-4, SiltConvention::full_square);
    EXPECT_NEAR(v, 1.0, 0.02);
    const double coarse = silt_pair_sum(linear_path(2048, 1.0), 1e-4, SiltConvention::full_square);
    EXPECT_LT(coarse, v);
}

TEST(SiltPairSum, Errors) {
    const PathSample nu{TimeGrid(1.0, {0.0, 0.2, 1.0}), {0.0, 0.1, 0.0}};
    EXPECT_THROW((void)silt_pair_sum(nu, 0.1, SiltConvention::ordered), InputError);
    const auto p = constant_path(4, 1.0, 0.0);
    EXPECT_THROW((void)silt_pair_sum(p, 0.0, SiltConvention::ordered), InputError);
    EXPECT_THROW((void)silt_pair_sums(p, std::vector<double>{}, SiltConvention::ordered), InputError);
}

TEST(MeanSiltQuadrature, ZeroEpsLimits) {
    EXPECT_NEAR(mean_silt_quadrature(1.0, 0.0, ProcessKind::bridge, SiltConvention::ordered),
                std::sqrt(M_PI / 8.0), 1e-7);
    EXPECT_NEAR(mean_silt_quadrature(1.0, 0.0, ProcessKind::motion, SiltConvention::ordered),
                4.0 / (3.0 * std::sqrt(2.0 * M_PI)), 1e-7);
    EXPECT_NEAR(mean_silt_quadrature(1.0, 0.0, ProcessKind::bridge, SiltConvention::full_square),
                2.0 * std::sqrt(M_PI / 8.0), 2e-7);
}

TEST(MeanSiltQuadrature, MotionClosedFormAtPositiveEps) {
    // ∫_0^T (T − u)(2π(u + ε))^{−1/2} du in closed form.
    const double T = 2.0, eps = 0.05;
    const double a = std::sqrt(T + eps), b = std::sqrt(eps);
    const double F = 2.0 * (T + eps) * (a - b) - (2.0 / 3.0) * (a * a * a - b * b * b);
    EXPECT_NEAR(mean_silt_quadrature(T, eps, ProcessKind::motion, SiltConvention::ordered),
                F / std::sqrt(2.0 * M_PI), 1e-9);
}

TEST(MeanSiltQuadrature, DecreasesInEps) {
    double prev = 1e9;
    for (double eps : {1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0}) {
        const double v = mean_silt_quadrature(1.0, eps, ProcessKind::bridge, SiltConvention::ordered);
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_LT(prev, 0.03);
    EXPECT_THROW((void)mean_silt_quadrature(0.0, 0.1, ProcessKind::bridge, SiltConvention::ordered), InputError);
    EXPECT_THROW((void)mean_silt_quadrature(1.0, -0.1, ProcessKind::bridge, SiltConvention::ordered), InputError);
}

TEST(MeanSiltDiscrete, ConvergesAtFirstOrder) {
    const double Q = mean_silt_quadrature(1.0, 1e-2, ProcessKind::bridge, SiltConvention::ordered);
    const double e1 = Q - mean_silt_discrete(1.0, 128, 1e-2, ProcessKind::bridge, SiltConvention::ordered);
    const double e2 = Q - mean_silt_discrete(1.0, 256, 1e-2, ProcessKind::bridge, SiltConvention::ordered);
    EXPECT_GT(e2, 0.0);
    EXPECT_NEAR(e1 / e2, 2.0, 0.1);
}

TEST(MeanSiltDiscrete, MatchesMonteCarloOfPairSum) {
    SiltMcSpec s;
    s.eps = {0.05};
    s.grid_n = 48;
    s.n_samples = 40000;
    s.shards = ShardPlan{31};
    const auto r = silt_moments_mc(s).front();
    const double D = mean_silt_discrete(1.0, 48, 0.05, ProcessKind::bridge, SiltConvention::ordered);
    EXPECT_LE(std::abs(r.mean.value - D), 3.0 * r.mean.std_error);
    EXPECT_GT(r.mean.std_error, 0.0);
    EXPECT_EQ(r.mean.n_samples, 40000u);
}

TEST(OverlapLength, Examples) {
    auto g = overlap_length(0, 1, 2, 3);
    EXPECT_EQ(g.m, 0.0);
    EXPECT_EQ(g.region, OverlapRegion::D1);
    g = overlap_length(0, 2, 1, 3);
    EXPECT_EQ(g.m, 1.0);
    EXPECT_EQ(g.region, OverlapRegion::D2);
    g = overlap_length(0, 3, 1, 2);
    EXPECT_EQ(g.m, 1.0);
    EXPECT_EQ(g.region, OverlapRegion::D3);
    g = overlap_length(2, 3, 0, 1);
    EXPECT_EQ(g.region, OverlapRegion::D1);
    EXPECT_TRUE(g.swapped);
    EXPECT_THROW((void)overlap_length(1, 1, 0, 2), InputError);
    EXPECT_THROW((void)overlap_length(0, 1, 3, 2), InputError);
}

TEST(IncrementCovDet, Examples) {
    EXPECT_NEAR(increment_cov_det(0.0, 0.25, 0.5, 0.75, 1.0), 0.03125, 1e-15);
    EXPECT_NEAR(increment_cov_det(0.2, 0.6, 0.2, 0.6, 1.0), 0.0, 1e-15);
    EXPECT_THROW((void)increment_cov_det(0.0, 1.5, 0.0, 0.5, 1.0), InputError);
    EXPECT_THROW((void)increment_cov_det(0.5, 0.2, 0.0, 0.5, 1.0), InputError);
}

TEST(IncrementCovDet, MatchesAssembledCovariance) {
    RngStream rng(8);
    auto cov = [](double s, double t, double T) { return std::min(s, t) - s * t / T; };
    for (int i = 0; i < 1000; ++i) {
        const double T = 0.3 + 3.0 * rng.uniform();
        double s1 = T * rng.uniform(), t1 = T * rng.uniform(), s2 = T * rng.uniform(), t2 = T * rng.uniform();
        if (s1 > t1) std::swap(s1, t1);
        if (s2 > t2) std::swap(s2, t2);
        const double v1 = cov(t1, t1, T) - 2 * cov(s1, t1, T) + cov(s1, s1, T);
        const double v2 = cov(t2, t2, T) - 2 * cov(s2, t2, T) + cov(s2, s2, T);
        const double c = cov(t1, t2, T) - cov(t1, s2, T) - cov(s1, t2, T) + cov(s1, s2, T);
        ASSERT_NEAR(increment_cov_det(s1, t1, s2, t2, T), v1 * v2 - c * c, 1e-12);
        const double e1 = 0.01 * rng.uniform(), e2 = 0.01 * rng.uniform();
        ASSERT_NEAR(increment_cov_det_regularized(s1, t1, s2, t2, T, e1, e2), (v1 + e1) * (v2 + e2) - c * c, 1e-12);
    }
}

TEST(LocalTimeOracle, LinearPath) {
    const auto v = silt_local_time_oracle(linear_path(4096, 1.0), 0.01);
    EXPECT_NEAR(v.value, 1.0, 0.01);
    EXPECT_FALSE(v.degenerate);
    EXPECT_EQ(v.shifts, 8u);
}

TEST(LocalTimeOracle, ConstantPathIsFlagged) {
    const auto v = silt_local_time_oracle(constant_path(64, 2.0, 0.3), 0.05);
    EXPECT_TRUE(v.degenerate);
    EXPECT_NEAR(v.value, 4.0 / 0.05, 1e-9);
}

TEST(LocalTimeOracle, AgreesWithPairSumAtMatchedWidth) {
    const auto g = TimeGrid::uniform(1.0, 2048);
    for (std::uint64_t s = 0; s < 5; ++s) {
        RngStream rng(12, s);
        const auto p = sample_bridge(g, 0.0, 0.0, rng);
        const double ps = silt_pair_sum(p, 1e-3, SiltConvention::full_square);
        const double lt = silt_local_time_oracle(p, matched_bin_width(1e-3)).value;
        EXPECT_NEAR(ps / lt, 1.0, 0.05);
    }
}

TEST(LocalTimeOracle, Errors) {
    const auto p = linear_path(16, 1.0);
    EXPECT_THROW((void)silt_local_time_oracle(p, 0.0), InputError);
    EXPECT_THROW((void)silt_local_time_oracle(p, -1.0), InputError);
    EXPECT_THROW((void)silt_local_time_oracle(p, 0.1, 0), InputError);
    EXPECT_THROW((void)matched_bin_width(0.0), InputError);
    EXPECT_DOUBLE_EQ(matched_bin_width(1.5), 3.0);
}
