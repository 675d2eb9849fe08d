#pragma once

// Projections P_⊥,η ξ = ξ − ⟨ξ,η⟩η and the operator P_η on chaos vectors:
//   (P_η Φ) = Σ_n Σ_k n!(−1)^k / (k!(n−2k)! 2^k)
//             ⟨:·^{⊗(n−2k)}:, P_⊥,η^{⊗(n−2k)} (η^{⊗2k} ⊗̂_{2k} φ^{(n)})⟩.

#include "silt/chaos/chaos_vector.hpp"
#include "silt/chaos/tensor.hpp"
#include "silt/errors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <vector>

namespace silt::chaos {

inline constexpr double unit_tolerance = 1e-12;

// η must be real with Euclidean norm 1.
inline void require_unit(const BasisVector& eta, const char* what) {
    if (eta.imag().cwiseAbs().maxCoeff() > 0.0)
        throw InputError(std::string(what) + ": eta must be real");
    if (std::abs(eta.norm() - 1.0) > unit_tolerance)
        throw InputError(std::string(what) + ": eta must have unit norm");
}

[[nodiscard]] inline BasisVector project_orth(const BasisVector& xi, const BasisVector& eta) {
    require_unit(eta, "project_orth");
    if (xi.size() != eta.size()) throw InputError("project_orth: dimension mismatch");
    const cplx c = (xi.array() * eta.array()).sum();
    return xi - c * eta;
}

// I − η ηᵀ
[[nodiscard]] inline Eigen::MatrixXcd orth_projector(const BasisVector& eta) {
    require_unit(eta, "orth_projector");
    const auto d = eta.size();
    return Eigen::MatrixXcd::Identity(d, d) - eta * eta.transpose();
}

[[nodiscard]] inline ChaosVector project_eta(const ChaosVector& phi, const BasisVector& eta) {
    require_unit(eta, "project_eta");
    if (static_cast<std::size_t>(eta.size()) != phi.basis_dim())
        throw InputError("project_eta: dimension mismatch");
    const std::size_t d = phi.basis_dim();
    const Eigen::MatrixXcd P = orth_projector(eta);
    std::vector<std::optional<Tensor>> acc(phi.max_degree() + 1);

    for (std::size_t n = 0; n <= phi.max_degree(); ++n) {
        if (phi.kernel(n).empty()) continue;
        const Tensor f = phi.kernel_tensor(n);
        for (std::size_t k = 0; 2 * k <= n; ++k) {
            const double coef = factorial(n) * (k % 2 ? -1.0 : 1.0) /
                                (factorial(k) * factorial(n - 2 * k) * std::pow(2.0, static_cast<double>(k)));
            const Tensor h = contract_symmetric(Tensor::power(eta, 2 * k), f, k).apply_each_slot(P);
            auto& slot = acc[n - 2 * k];
            if (!slot) slot.emplace(d, n - 2 * k);
            Tensor& a = *slot;
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += coef * h[i];
        }
    }
    ChaosVector out(d, phi.max_degree());
    for (const auto& t : acc)
        if (t) out.set_kernel(*t);
    return out;
}

}  // namespace silt::chaos
