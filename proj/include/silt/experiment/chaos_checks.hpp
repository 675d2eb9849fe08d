#pragma once

// Randomized verification of the chaos-algebra identities, shared by the
// chaos-verify experiment and the selftest.

#include "silt/chaos.hpp"
#include "silt/experiment/check.hpp"
#include "silt/quadrature.hpp"
#include "silt/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace silt::experiment {

namespace detail {

using chaos::BasisVector;
using chaos::ChaosVector;

inline BasisVector random_real(RngStream& rng, std::size_t d) {
    BasisVector v(static_cast<Eigen::Index>(d));
    for (auto& x : v) x = rng.normal();
    return v;
}

inline BasisVector random_unit(RngStream& rng, std::size_t d) {
    BasisVector v = random_real(rng, d);
    return v / v.norm();
}

inline BasisVector random_complex(RngStream& rng, std::size_t d, double scale) {
    BasisVector v(static_cast<Eigen::Index>(d));
    for (auto& x : v) x = scale * chaos::cplx{rng.normal(), rng.normal()};
    return v;
}

// Dense random real kernels at every order <= degree.
inline ChaosVector random_chaos(RngStream& rng, std::size_t d, std::size_t degree, std::size_t cap) {
    ChaosVector v(d, cap);
    for (std::size_t n = 0; n <= degree; ++n)
        chaos::detail::for_each_index(d, n, [&](const chaos::Index& idx) { v.set(idx, rng.normal() / (1.0 + n)); });
    return v;
}

}  // namespace detail

// E[δ(⟨·,η⟩) f(⟨·,ξ⟩)] = ∫ f(y) φ(0, y) dy with (⟨·,η⟩, ⟨·,ξ⟩) jointly
// Gaussian, var 1 and |ξ|², covariance ⟨ξ,η⟩.
inline double delta_expectation_oracle(const std::vector<double>& coeffs, double xi_sq, double rho) {
    const double D = xi_sq - rho * rho;
    if (!(D > 0.0)) throw InputError("delta_expectation_oracle: degenerate covariance");
    const double sd = std::sqrt(D);
    auto f = [&](double y) {
        double p = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) p = p * y + coeffs[k];
        return p * std::exp(-0.5 * y * y / D) / (2.0 * M_PI * sd);
    };
    double acc = 0.0;
    for (int k = -12; k < 12; ++k)
        acc += quad::integrate(f, k * sd, (k + 1) * sd, {1e-13, 1e-18, 18}, "delta_expectation_oracle").value;
    return acc;
}

inline std::vector<CheckResult> run_chaos_checks(std::uint64_t seed, std::size_t trials, double z_max,
                                                 std::size_t orth_draws = 100000) {
    using namespace silt::chaos;
    std::vector<CheckResult> out;
    RngStream rng(seed, 0);

    {  // Wick formula vs direct Gaussian quadrature
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t d = 4;
            const BasisVector eta = detail::random_unit(rng, d);
            const BasisVector xi = detail::random_real(rng, d);
            const std::size_t deg = 1 + t % 4;
            std::vector<double> c(deg + 1);
            for (auto& x : c) x = rng.normal();
            const auto st = wick_formula_product(eta, GaussianPolynomial::univariate(xi, c));
            const double rho = xi.real().dot(eta.real());
            const double ref = delta_expectation_oracle(c, xi.real().squaredNorm(), rho);
            worst = std::max(worst, std::abs(st.expectation() - ref));
        }
        out.push_back(make_check("wick-formula-expectation", worst, 1e-8));
    }
    {  // S(Φ⋄Ψ) = SΦ SΨ
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto phi = detail::random_chaos(rng, 4, 3, 6);
            const auto psi = detail::random_chaos(rng, 4, 3, 6);
            const auto w = wick_product(phi, psi);
            const BasisVector xi = detail::random_complex(rng, 4, 0.5);
            const cplx lhs = s_transform(w, xi);
            const cplx rhs = s_transform(phi, xi) * s_transform(psi, xi);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        out.push_back(make_check("s-transform-wick-product", worst, 1e-10));
    }
    {  // P_η(φψ) = P_η φ · P_η ψ and P_η² = P_η
        double mult = 0.0, idem = 0.0;
        for (std::size_t t = 0; t < std::max<std::size_t>(1, trials / 4); ++t) {
            const BasisVector eta = detail::random_unit(rng, 4);
            const auto phi = detail::random_chaos(rng, 4, 3, 6);
            const auto psi = detail::random_chaos(rng, 4, 3, 6);
            const auto lhs = project_eta(pointwise_product(phi, psi), eta);
            const auto pphi = project_eta(phi, eta);
            const auto rhs = pointwise_product(pphi, project_eta(psi, eta));
            mult = std::max(mult, lhs.max_abs_diff(rhs));
            idem = std::max(idem, project_eta(pphi, eta).max_abs_diff(pphi));
        }
        out.push_back(make_check("projection-multiplicative", mult, 1e-10));
        out.push_back(make_check("projection-idempotent", idem, 1e-10));
    }
    {  // motion kernel 1_[0,t) ↦ bridge kernel 1_[0,t) − (t/T) 1_[0,T)
        const HaarBasis basis(1.0, 3);
        double worst = 0.0;
        for (std::size_t k = 0; k <= basis.dim(); ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(basis.dim());
            const auto p = project_eta(first_order(basis.indicator(t)), basis.eta());
            const BasisVector bridge = basis.indicator(t) - t * basis.indicator(1.0);
            const auto expected = first_order(bridge);
            worst = std::max(worst, p.max_abs_diff(expected));
        }
        out.push_back(make_check("projection-bridge-identity", worst, 0.0));
    }
    {  // δ(⟨·,η⟩ − a) = z^{−1} δ(⟨·,η/z⟩ − a/z), z = √i
        const cplx z = std::sqrt(cplx{0.0, 1.0});
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const BasisVector eta = detail::random_unit(rng, 4);
            const cplx a{rng.normal(), 0.0};
            const auto lhs = donsker_delta(eta, a);
            const auto rhs = donsker_delta(eta / z, a / z);
            const BasisVector xi = detail::random_complex(rng, 4, 0.5);
            const cplx l = lhs(xi), r = rhs(xi) / z;
            worst = std::max(worst, std::abs(l - r) / std::abs(l));
        }
        out.push_back(make_check("donsker-homogeneity", worst, 1e-12));
    }
    {  // Gaussian norm comparison
        std::size_t failed = 0;
        const std::size_t n = 100;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t d = 1 + t % 3;
            Eigen::MatrixXd A(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)), B = A;
            for (Eigen::Index i = 0; i < A.size(); ++i) {
                A.data()[i] = rng.normal();
                B.data()[i] = rng.normal();
            }
            const Eigen::MatrixXd N = A * A.transpose() + 0.2 * Eigen::MatrixXd::Identity(A.rows(), A.cols());
            Eigen::MatrixXd M = N + B * B.transpose();
            M = 0.5 * (M + M.transpose());
            Polynomial f{d, {}};
            for (int k = 0; k < 4; ++k) {
                std::vector<unsigned> e(d);
                unsigned left = static_cast<unsigned>(rng.uniform() * 5.0);
                for (auto& x : e) {
                    x = static_cast<unsigned>(rng.uniform() * (left + 1));
                    left -= x;
                }
                f.terms[e] += rng.normal();
            }
            const double p = 1.0 + 3.0 * rng.uniform();
            if (!gaussian_norm_inequality_check(M, N, f, p, 24).holds) ++failed;
        }
        out.push_back(make_check("gaussian-norm-inequality", static_cast<double>(failed), 0.0,
                                         std::to_string(n) + " random cases"));
    }
    {  // E[:⟨·,ξ⟩^n: :⟨·,ζ⟩^m:] = δ_nm n! ⟨ξ,ζ⟩^n
        const std::size_t d = 3, top = 3;
        const BasisVector xi = detail::random_unit(rng, d) * 0.9;
        const BasisVector zeta = detail::random_unit(rng, d) * 0.9;
        std::vector<ChaosVector> a, b;
        for (std::size_t n = 0; n <= top; ++n) {
            a.push_back(wick_power(xi, n, top));
            b.push_back(wick_power(zeta, n, top));
        }
        const std::size_t K = (top + 1) * (top + 1);
        std::vector<double> sum(K, 0.0), sum_sq(K, 0.0);
        Eigen::VectorXd omega(static_cast<Eigen::Index>(d));
        RngStream mc(seed, 1);
        std::vector<double> va(top + 1), vb(top + 1);
        for (std::size_t s = 0; s < orth_draws; ++s) {
            for (auto& x : omega) x = mc.normal();
            for (std::size_t n = 0; n <= top; ++n) {
                va[n] = evaluate_pointwise(a[n], omega).real();
                vb[n] = evaluate_pointwise(b[n], omega).real();
            }
            for (std::size_t n = 0; n <= top; ++n)
                for (std::size_t m = 0; m <= top; ++m) {
                    const double v = va[n] * vb[m];
                    sum[n * (top + 1) + m] += v;
                    sum_sq[n * (top + 1) + m] += v * v;
                }
        }
        const double dot = xi.real().dot(zeta.real());
        double worst = 0.0;
        for (std::size_t n = 0; n <= top; ++n)
            for (std::size_t m = 0; m <= top; ++m) {
                const double N = static_cast<double>(orth_draws);
                const double mean = sum[n * (top + 1) + m] / N;
                const double var = std::max(0.0, sum_sq[n * (top + 1) + m] / N - mean * mean);
                const double se = std::sqrt(var / (N - 1.0));
                const double ref = n == m ? factorial(n) * std::pow(dot, static_cast<double>(n)) : 0.0;
                if (se > 0.0) worst = std::max(worst, std::abs(mean - ref) / se);
                else worst = std::max(worst, std::abs(mean - ref) > 1e-12 ? 1e300 : 0.0);
            }
        out.push_back(make_check("wick-power-orthogonality", worst, z_max, "max |z| over 16 pairs"));
    }
    return out;
}

}  // namespace silt::experiment
