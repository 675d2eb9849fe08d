#pragma once

// Regular distributions handled through their S-transforms. The value at
// ξ = 0 is the generalized expectation.

#include "silt/chaos/chaos_vector.hpp"
#include "silt/errors.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <string>

namespace silt::chaos {

enum class STransformKind { chaos_derived, donsker_delta, wick_product };

inline const char* to_string(STransformKind k) {
    switch (k) {
        case STransformKind::chaos_derived: return "chaos-derived";
        case STransformKind::donsker_delta: return "donsker-delta";
        default: return "wick-product";
    }
}

class STransformObject {
public:
    using Evaluator = std::function<cplx(const BasisVector&)>;

    STransformObject(STransformKind kind, std::size_t basis_dim, Evaluator eval)
        : kind_(kind), dim_(basis_dim), eval_(std::move(eval)) {}

    [[nodiscard]] cplx operator()(const BasisVector& xi) const {
        if (static_cast<std::size_t>(xi.size()) != dim_)
            throw InputError("STransformObject: argument has wrong dimension");
        return eval_(xi);
    }
    [[nodiscard]] cplx expectation() const { return (*this)(BasisVector::Zero(static_cast<Eigen::Index>(dim_))); }
    [[nodiscard]] STransformKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t basis_dim() const noexcept { return dim_; }

private:
    STransformKind kind_;
    std::size_t dim_;
    Evaluator eval_;
};

[[nodiscard]] inline STransformObject from_chaos(ChaosVector phi) {
    const std::size_t d = phi.basis_dim();
    auto p = std::make_shared<const ChaosVector>(std::move(phi));
    return {STransformKind::chaos_derived, d, [p](const BasisVector& xi) { return s_transform(*p, xi); }};
}

// S(Φ⋄Ψ) = SΦ · SΨ
[[nodiscard]] inline STransformObject wick_product(const STransformObject& a, const STransformObject& b) {
    if (a.basis_dim() != b.basis_dim()) throw InputError("wick_product: basis dimension mismatch");
    return {STransformKind::wick_product, a.basis_dim(), [a, b](const BasisVector& xi) { return a(xi) * b(xi); }};
}

// δ(⟨·,η⟩ − a): (2π⟨η,η⟩)^{−1/2} exp(−(a − ⟨ξ,η⟩)² / 2⟨η,η⟩) with the
// bilinear ⟨η,η⟩ and the principal square root. ⟨η,η⟩ on (−∞, 0] is rejected.
[[nodiscard]] inline STransformObject donsker_delta(const BasisVector& eta, cplx a) {
    const cplx s = (eta.array() * eta.array()).sum();
    if (s.imag() == 0.0 && s.real() <= 0.0)
        throw InputError("donsker_delta: <eta,eta> lies on the branch cut (-inf, 0]");
    const cplx pre = 1.0 / std::sqrt(2.0 * M_PI * s);
    return {STransformKind::donsker_delta, static_cast<std::size_t>(eta.size()),
            [eta, a, s, pre](const BasisVector& xi) {
                const cplx p = (xi.array() * eta.array()).sum();
                const cplx u = a - p;
                return pre * std::exp(-(u * u) / (2.0 * s));
            }};
}

}  // namespace silt::chaos
