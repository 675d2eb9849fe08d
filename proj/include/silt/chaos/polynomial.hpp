#pragma once

// Functions of finitely many Gaussians f(⟨·,ξ_1⟩, ..., ⟨·,ξ_k⟩) with f a
// polynomial, their chaos expansions, and the Wick formula
//   δ(⟨·,η⟩) · f(⟨·,ξ_1⟩, ...) = δ(⟨·,η⟩) ⋄ P_η f.

#include "silt/chaos/chaos_vector.hpp"
#include "silt/chaos/projection.hpp"
#include "silt/chaos/s_transform.hpp"
#include "silt/errors.hpp"

#include <Eigen/Dense>

#include <map>
#include <vector>

namespace silt::chaos {

struct GaussianPolynomial {
    std::vector<BasisVector> directions;                  // ξ_1..ξ_k, real
    std::map<std::vector<unsigned>, double> coefficients;  // exponent per direction → coefficient

    [[nodiscard]] std::size_t degree() const {
        std::size_t d = 0;
        for (const auto& [e, c] : coefficients) {
            std::size_t s = 0;
            for (auto p : e) s += p;
            if (c != 0.0) d = std::max(d, s);
        }
        return d;
    }

    [[nodiscard]] double operator()(const std::vector<double>& y) const {
        double s = 0.0;
        for (const auto& [e, c] : coefficients) {
            double t = c;
            for (std::size_t j = 0; j < e.size(); ++j) t *= std::pow(y[j], static_cast<double>(e[j]));
            s += t;
        }
        return s;
    }

    // One-direction polynomial Σ_p c_p ⟨·,ξ⟩^p.
    static GaussianPolynomial univariate(const BasisVector& xi, const std::vector<double>& c) {
        GaussianPolynomial f;
        f.directions = {xi};
        for (unsigned p = 0; p < c.size(); ++p)
            if (c[p] != 0.0) f.coefficients[{p}] = c[p];
        return f;
    }
};

// ⟨·,ξ⟩^p = Σ_r p!/(r!(p−2r)! 2^r) ⟨ξ,ξ⟩^r :⟨·,ξ⟩^{p−2r}:
[[nodiscard]] inline ChaosVector monomial_chaos(const BasisVector& xi, unsigned p, std::size_t max_degree) {
    const cplx s = (xi.array() * xi.array()).sum();
    ChaosVector v(static_cast<std::size_t>(xi.size()), max_degree);
    for (unsigned r = 0; 2 * r <= p; ++r) {
        const double c = factorial(p) / (factorial(r) * factorial(p - 2 * r) * std::pow(2.0, r));
        v += (c * std::pow(s, static_cast<double>(r))) * wick_power(xi, p - 2 * r, max_degree);
    }
    return v;
}

// `dim` is only needed for constants (no directions).
[[nodiscard]] inline ChaosVector to_chaos(const GaussianPolynomial& f, std::size_t max_degree = default_max_degree,
                                          std::size_t dim = 0) {
    if (f.directions.empty() && dim == 0) throw InputError("to_chaos: polynomial has no directions");
    const auto d = f.directions.empty() ? dim : static_cast<std::size_t>(f.directions.front().size());
    for (const auto& x : f.directions)
        if (static_cast<std::size_t>(x.size()) != d) throw InputError("to_chaos: direction dimension mismatch");
    if (f.degree() > max_degree) throw TruncationError("to_chaos: polynomial degree exceeds cap");
    ChaosVector out(d, max_degree);
    for (const auto& [e, c] : f.coefficients) {
        if (e.size() != f.directions.size()) throw InputError("to_chaos: exponent length mismatch");
        ChaosVector term = ChaosVector::constant(c, d, max_degree);
        for (std::size_t j = 0; j < e.size(); ++j)
            if (e[j] > 0) term = pointwise_product(term, monomial_chaos(f.directions[j], e[j], max_degree));
        out += term;
    }
    return out;
}

// Residual of η after least-squares projection onto span{ξ_j}.
[[nodiscard]] inline double distance_to_span(const BasisVector& eta, const std::vector<BasisVector>& dirs) {
    if (dirs.empty()) return eta.norm();
    Eigen::MatrixXcd A(eta.size(), static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t j = 0; j < dirs.size(); ++j) A.col(static_cast<Eigen::Index>(j)) = dirs[j];
    const Eigen::VectorXcd x = A.completeOrthogonalDecomposition().solve(eta);
    return (A * x - eta).norm();
}

// S-transform of δ(⟨·,η⟩) · Φ, i.e. S(δ)(ξ) · S(P_η Φ)(ξ).
[[nodiscard]] inline STransformObject wick_formula_product(const BasisVector& eta, const ChaosVector& phi) {
    return wick_product(donsker_delta(eta, 0.0), from_chaos(project_eta(phi, eta)));
}

// Requires η outside the span of the generating directions.
[[nodiscard]] inline STransformObject wick_formula_product(const BasisVector& eta, const GaussianPolynomial& f,
                                                           std::size_t max_degree = default_max_degree) {
    require_unit(eta, "wick_formula_product");
    if (distance_to_span(eta, f.directions) <= 1e-10)
        throw UnsupportedError("wick_formula_product: eta lies in the span of the polynomial's directions");
    return wick_formula_product(eta, to_chaos(f, max_degree, static_cast<std::size_t>(eta.size())));
}

}  // namespace silt::chaos
