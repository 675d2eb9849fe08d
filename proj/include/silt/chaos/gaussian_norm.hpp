#pragma once

// L^p norms of polynomials under centred Gaussian measures μ_C and the
// comparison ‖f‖_{L^p(μ_N)} <= (det M / det N)^{1/2p} ‖f‖_{L^p(μ_M)} for
// 0 < N <= M, evaluated with tensor Gauss–Hermite quadrature.

#include "silt/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <vector>

namespace silt::chaos {

struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;  // sum to 1: rule for E f(Z), Z ~ N(0,1)
};

// Golub–Welsch on the Jacobi matrix of the probabilists' Hermite recurrence.
[[nodiscard]] inline GaussHermiteRule gauss_hermite(std::size_t n) {
    if (n == 0) throw InputError("gauss_hermite: need at least one node");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k < n; ++k) {
        const double b = std::sqrt(static_cast<double>(k));
        J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = b;
        J(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussHermiteRule r;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        r.nodes.push_back(es.eigenvalues()[i]);
        const double v = es.eigenvectors()(0, i);
        r.weights.push_back(v * v);
    }
    return r;
}

// Real polynomial in `dim` variables: exponent vector → coefficient.
struct Polynomial {
    std::size_t dim = 1;
    std::map<std::vector<unsigned>, double> terms;

    [[nodiscard]] double operator()(const Eigen::VectorXd& x) const {
        double s = 0.0;
        for (const auto& [e, c] : terms) {
            double t = c;
            for (std::size_t i = 0; i < dim; ++i) t *= std::pow(x[static_cast<Eigen::Index>(i)], static_cast<double>(e[i]));
            s += t;
        }
        return s;
    }
};

// (E_{μ_C} |f|^p)^{1/p} with μ_C = N(0, C); nodes per dimension.
[[nodiscard]] inline double gaussian_lp_norm(const Eigen::MatrixXd& C, const Polynomial& f, double p,
                                             std::size_t nodes = 40) {
    const auto d = static_cast<std::size_t>(C.rows());
    if (d != f.dim) throw InputError("gaussian_lp_norm: dimension mismatch");
    if (d == 0 || d > 4) throw InputError("gaussian_lp_norm: supports 1 to 4 dimensions");
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success) throw PreconditionError("gaussian_lp_norm: covariance not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    const auto rule = gauss_hermite(nodes);
    std::vector<std::size_t> k(d, 0);
    Eigen::VectorXd z(static_cast<Eigen::Index>(d));
    double acc = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            z[static_cast<Eigen::Index>(i)] = rule.nodes[k[i]];
            w *= rule.weights[k[i]];
        }
        acc += w * std::pow(std::abs(f(L * z)), p);
        std::size_t i = 0;
        while (i < d && ++k[i] == nodes) k[i++] = 0;
        if (i == d) break;
    }
    return std::pow(acc, 1.0 / p);
}

struct NormInequality {
    double lhs = 0.0;     // ‖f‖_{L^p(μ_N)}
    double rhs = 0.0;     // (det M / det N)^{1/2p} ‖f‖_{L^p(μ_M)}
    double factor = 1.0;  // (det M / det N)^{1/2p}
    bool holds = false;
    explicit operator bool() const { return holds; }
};

inline constexpr double norm_check_slack = 1e-10;

[[nodiscard]] inline NormInequality gaussian_norm_inequality_check(const Eigen::MatrixXd& M, const Eigen::MatrixXd& N,
                                                                   const Polynomial& f, double p,
                                                                   std::size_t nodes = 40) {
    if (!(p >= 1.0)) throw InputError("gaussian_norm_inequality_check: p must be >= 1");
    if (M.rows() != M.cols() || N.rows() != N.cols() || M.rows() != N.rows())
        throw InputError("gaussian_norm_inequality_check: shape mismatch");
    const double scale = std::max(M.cwiseAbs().maxCoeff(), N.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale ||
        (N - N.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw PreconditionError("gaussian_norm_inequality_check: matrices must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> en(N), ed(M - N);
    if (!(en.eigenvalues().minCoeff() > 0.0))
        throw PreconditionError("gaussian_norm_inequality_check: N must be positive definite");
    if (ed.eigenvalues().minCoeff() < -1e-12 * scale)
        throw PreconditionError("gaussian_norm_inequality_check: requires N <= M");

    NormInequality r;
    r.factor = std::pow(M.determinant() / N.determinant(), 1.0 / (2.0 * p));
    r.lhs = gaussian_lp_norm(N, f, p, nodes);
    r.rhs = r.factor * gaussian_lp_norm(M, f, p, nodes);
    r.holds = r.lhs <= r.rhs * (1.0 + norm_check_slack);
    return r;
}

}  // namespace silt::chaos
