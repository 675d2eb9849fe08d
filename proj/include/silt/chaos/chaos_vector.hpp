#pragma once

// Truncated chaos expansions Φ = Σ_n ⟨:ω^{⊗n}:, φ^{(n)}⟩ over an orthonormal
// basis e_1..e_d. Kernels are symmetric, so each is stored once per sorted
// index tuple α; the value is φ^{(n)}_α for every permutation of α.
//
// With k_i the multiplicity of direction i in α and mult(α) = n!/Π k_i!,
//   S Φ(ξ)  = Σ mult(α) φ_α Π ξ_i^{k_i}
//   Φ(ω)    = Σ mult(α) φ_α Π He_{k_i}(ω_i)
//   ‖φ^{(n)}‖² = Σ mult(α) |φ_α|².

#include "silt/chaos/tensor.hpp"
#include "silt/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace silt::chaos {

using Index = std::vector<std::uint8_t>;      // sorted basis indices, length = order
using Exponents = std::vector<std::uint8_t>;  // multiplicity per basis direction

inline constexpr std::size_t default_basis_dim = 8;
inline constexpr std::size_t default_max_degree = 6;

[[nodiscard]] inline double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

[[nodiscard]] inline double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

[[nodiscard]] inline Exponents to_exponents(const Index& idx, std::size_t dim) {
    Exponents e(dim, 0);
    for (auto i : idx) ++e[i];
    return e;
}

[[nodiscard]] inline Index from_exponents(const Exponents& e) {
    Index idx;
    for (std::size_t i = 0; i < e.size(); ++i) idx.insert(idx.end(), e[i], static_cast<std::uint8_t>(i));
    return idx;
}

// Number of distinct orderings of the sorted tuple.
[[nodiscard]] inline double multiplicity(const Exponents& e) {
    std::size_t n = 0;
    double denom = 1.0;
    for (auto k : e) {
        n += k;
        denom *= factorial(k);
    }
    return factorial(n) / denom;
}

// Probabilists' Hermite polynomials He_0..He_n at x.
inline void hermite_table(double x, std::size_t n, std::vector<double>& out) {
    out.resize(n + 1);
    out[0] = 1.0;
    if (n >= 1) out[1] = x;
    for (std::size_t k = 1; k < n; ++k) out[k + 1] = x * out[k] - static_cast<double>(k) * out[k - 1];
}

[[nodiscard]] inline double hermite(std::size_t n, double x) {
    std::vector<double> t;
    hermite_table(x, n, t);
    return t[n];
}

class ChaosVector {
public:
    using Kernel = std::map<Index, cplx>;

    explicit ChaosVector(std::size_t basis_dim = default_basis_dim, std::size_t max_degree = default_max_degree)
        : dim_(basis_dim), max_degree_(max_degree), kernels_(max_degree + 1) {
        if (basis_dim == 0 || basis_dim > 255) throw InputError("ChaosVector: basis_dim must be in 1..255");
    }

    static ChaosVector constant(cplx c, std::size_t basis_dim = default_basis_dim,
                                std::size_t max_degree = default_max_degree) {
        ChaosVector v(basis_dim, max_degree);
        v.set({}, c);
        return v;
    }
    static ChaosVector vacuum(std::size_t basis_dim = default_basis_dim,
                              std::size_t max_degree = default_max_degree) {
        return constant(1.0, basis_dim, max_degree);
    }

    [[nodiscard]] std::size_t basis_dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t max_degree() const noexcept { return max_degree_; }
    [[nodiscard]] const Kernel& kernel(std::size_t n) const {
        if (n > max_degree_) throw InputError("ChaosVector: order above degree cap");
        return kernels_[n];
    }

    // Any permutation of the index tuple addresses the same entry.
    [[nodiscard]] cplx get(Index idx) const {
        canonicalize(idx);
        const auto& k = kernels_[idx.size()];
        const auto it = k.find(idx);
        return it == k.end() ? cplx{0.0, 0.0} : it->second;
    }
    void set(Index idx, cplx v) {
        canonicalize(idx);
        if (v == cplx{0.0, 0.0})
            kernels_[idx.size()].erase(idx);
        else
            kernels_[idx.size()][idx] = v;
    }
    void add(Index idx, cplx v) { set(idx, get(idx) + v); }

    // Highest order with a nonzero entry (0 for the zero vector).
    [[nodiscard]] std::size_t degree() const {
        for (std::size_t n = max_degree_ + 1; n-- > 0;)
            if (!kernels_[n].empty()) return n;
        return 0;
    }
    [[nodiscard]] bool is_zero() const {
        return std::all_of(kernels_.begin(), kernels_.end(), [](const Kernel& k) { return k.empty(); });
    }

    // Dense view of φ^{(n)}.
    [[nodiscard]] Tensor kernel_tensor(std::size_t n) const {
        Tensor t(dim_, n);
        for (std::size_t f = 0; f < t.size(); ++f) t[f] = get(t.unflat(f));
        return t;
    }
    // Stores a tensor as φ^{(n)}; the tensor is symmetrized first.
    void set_kernel(const Tensor& t) {
        if (t.dim() != dim_) throw InputError("ChaosVector: tensor dimension mismatch");
        if (t.order() > max_degree_) throw TruncationError("ChaosVector: tensor order above degree cap");
        const Tensor s = symmetrize(t);
        kernels_[t.order()].clear();
        for (std::size_t f = 0; f < s.size(); ++f) {
            Index idx = s.unflat(f);
            if (std::is_sorted(idx.begin(), idx.end()) && s[f] != cplx{0.0, 0.0}) kernels_[t.order()][idx] = s[f];
        }
    }

    ChaosVector& operator+=(const ChaosVector& o) {
        check_compatible(o);
        for (std::size_t n = 0; n <= std::min(max_degree_, o.max_degree_); ++n)
            for (const auto& [idx, v] : o.kernels_[n]) add(idx, v);
        for (std::size_t n = max_degree_ + 1; n <= o.max_degree_; ++n)
            if (!o.kernels_[n].empty()) throw TruncationError("ChaosVector: sum exceeds degree cap");
        return *this;
    }
    ChaosVector& operator*=(cplx c) {
        for (auto& k : kernels_)
            for (auto it = k.begin(); it != k.end();) {
                it->second *= c;
                it = it->second == cplx{0.0, 0.0} ? k.erase(it) : std::next(it);
            }
        return *this;
    }
    friend ChaosVector operator+(ChaosVector a, const ChaosVector& b) { return a += b; }
    friend ChaosVector operator-(ChaosVector a, ChaosVector b) { return a += (b *= -1.0); }
    friend ChaosVector operator*(cplx c, ChaosVector a) { return a *= c; }

    // Largest entrywise difference over all orders present in either.
    [[nodiscard]] double max_abs_diff(const ChaosVector& o) const {
        check_compatible(o);
        double m = 0.0;
        const std::size_t top = std::max(max_degree_, o.max_degree_);
        for (std::size_t n = 0; n <= top; ++n) {
            if (n <= max_degree_)
                for (const auto& [idx, v] : kernels_[n]) m = std::max(m, std::abs(v - o.get_or_zero(idx)));
            if (n <= o.max_degree_)
                for (const auto& [idx, v] : o.kernels_[n]) m = std::max(m, std::abs(v - get_or_zero(idx)));
        }
        return m;
    }

    void check_compatible(const ChaosVector& o) const {
        if (o.dim_ != dim_) throw InputError("ChaosVector: basis dimension mismatch");
    }

private:
    void canonicalize(Index& idx) const {
        if (idx.size() > max_degree_) throw TruncationError("ChaosVector: order above degree cap");
        for (auto i : idx)
            if (i >= dim_) throw InputError("ChaosVector: basis index out of range");
        std::sort(idx.begin(), idx.end());
    }
    [[nodiscard]] cplx get_or_zero(const Index& idx) const {
        if (idx.size() > max_degree_) return 0.0;
        const auto& k = kernels_[idx.size()];
        const auto it = k.find(idx);
        return it == k.end() ? cplx{0.0, 0.0} : it->second;
    }

    std::size_t dim_;
    std::size_t max_degree_;
    std::vector<Kernel> kernels_;
};

// ‖φ‖_q² = Σ n! 2^{qn} |φ^{(n)}|²
[[nodiscard]] inline double norm_q(const ChaosVector& phi, unsigned q) {
    double s = 0.0;
    for (std::size_t n = 0; n <= phi.max_degree(); ++n) {
        double kn = 0.0;
        for (const auto& [idx, v] : phi.kernel(n)) kn += multiplicity(to_exponents(idx, phi.basis_dim())) * std::norm(v);
        s += factorial(n) * std::pow(2.0, static_cast<double>(q * n)) * kn;
    }
    return std::sqrt(s);
}

namespace detail {

inline void check_vector(const BasisVector& v, std::size_t dim, const char* what) {
    if (static_cast<std::size_t>(v.size()) != dim) throw InputError(std::string(what) + ": vector has wrong dimension");
}

inline cplx monomial(const Exponents& e, const BasisVector& xi) {
    cplx p{1.0, 0.0};
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::uint8_t k = 0; k < e[i]; ++k) p *= xi[static_cast<Eigen::Index>(i)];
    return p;
}

// Visits every sorted index tuple of the given order.
template <class F>
void for_each_index(std::size_t dim, std::size_t order, F&& f) {
    Index idx(order, 0);
    while (true) {
        f(static_cast<const Index&>(idx));
        std::size_t k = order;
        while (k > 0 && idx[k - 1] == dim - 1) --k;
        if (k == 0) return;
        const std::uint8_t v = static_cast<std::uint8_t>(idx[k - 1] + 1);
        for (std::size_t j = k - 1; j < order; ++j) idx[j] = v;
    }
}

}  // namespace detail

// Kernel ξ^{⊗n} at order n only: the Wick power ⟨:ω^{⊗n}:, ξ^{⊗n}⟩.
[[nodiscard]] inline ChaosVector wick_power(const BasisVector& xi, std::size_t n,
                                            std::size_t max_degree = default_max_degree) {
    const auto d = static_cast<std::size_t>(xi.size());
    ChaosVector v(d, max_degree);
    if (n > max_degree) throw TruncationError("wick_power: order above degree cap");
    detail::for_each_index(d, n, [&](const Index& idx) { v.set(idx, detail::monomial(to_exponents(idx, d), xi)); });
    return v;
}

[[nodiscard]] inline ChaosVector first_order(const BasisVector& xi, std::size_t max_degree = default_max_degree) {
    return wick_power(xi, 1, max_degree);
}

// Kernels ξ^{⊗n}/n! for n <= N.
[[nodiscard]] inline ChaosVector wick_exponential(const BasisVector& xi, std::size_t N = default_max_degree) {
    const auto d = static_cast<std::size_t>(xi.size());
    ChaosVector v(d, N);
    for (std::size_t n = 0; n <= N; ++n) {
        const double inv = 1.0 / factorial(n);
        detail::for_each_index(d, n, [&](const Index& idx) {
            v.set(idx, inv * detail::monomial(to_exponents(idx, d), xi));
        });
    }
    return v;
}

// SΦ(ξ) = Σ_n ⟨φ^{(n)}, ξ^{⊗n}⟩ (bilinear pairing).
[[nodiscard]] inline cplx s_transform(const ChaosVector& phi, const BasisVector& xi) {
    detail::check_vector(xi, phi.basis_dim(), "s_transform");
    cplx s{0.0, 0.0};
    for (std::size_t n = 0; n <= phi.max_degree(); ++n)
        for (const auto& [idx, v] : phi.kernel(n)) {
            const auto e = to_exponents(idx, phi.basis_dim());
            s += multiplicity(e) * v * detail::monomial(e, xi);
        }
    return s;
}

// (Φ⋄Ψ)^{(n)} = Σ_{k+l=n} sym(φ^{(k)} ⊗ ψ^{(l)}), truncated at the larger
// of the two degree caps.
[[nodiscard]] inline ChaosVector wick_product(const ChaosVector& phi, const ChaosVector& psi) {
    phi.check_compatible(psi);
    const std::size_t d = phi.basis_dim();
    const std::size_t N = std::max(phi.max_degree(), psi.max_degree());
    // Work with c_α = mult(α) φ_α, the coefficients of S as a polynomial.
    std::map<Exponents, cplx> c;
    for (std::size_t n = 0; n <= phi.max_degree(); ++n)
        for (const auto& [ia, va] : phi.kernel(n)) {
            const auto ea = to_exponents(ia, d);
            const cplx ca = multiplicity(ea) * va;
            for (std::size_t m = 0; m <= psi.max_degree() && n + m <= N; ++m)
                for (const auto& [ib, vb] : psi.kernel(m)) {
                    auto eb = to_exponents(ib, d);
                    const cplx cb = multiplicity(eb) * vb;
                    for (std::size_t i = 0; i < d; ++i) eb[i] = static_cast<std::uint8_t>(eb[i] + ea[i]);
                    c[eb] += ca * cb;
                }
        }
    ChaosVector out(d, N);
    for (const auto& [e, v] : c) out.set(from_exponents(e), v / multiplicity(e));
    return out;
}

// Hermite realization Φ(ω) with ω the coordinates of d standard Gaussians.
[[nodiscard]] inline cplx evaluate_pointwise(const ChaosVector& phi, const Eigen::VectorXd& omega) {
    const std::size_t d = phi.basis_dim();
    if (static_cast<std::size_t>(omega.size()) != d) throw InputError("evaluate_pointwise: wrong dimension");
    const std::size_t N = phi.degree();
    std::vector<std::vector<double>> he(d);
    for (std::size_t i = 0; i < d; ++i) hermite_table(omega[static_cast<Eigen::Index>(i)], N, he[i]);
    cplx s{0.0, 0.0};
    for (std::size_t n = 0; n <= N; ++n)
        for (const auto& [idx, v] : phi.kernel(n)) {
            const auto e = to_exponents(idx, d);
            double p = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                if (e[i]) p *= he[i][e[i]];
            s += multiplicity(e) * v * p;
        }
    return s;
}

// Ordinary product Φ·Ψ via He_a He_b = Σ_r r! C(a,r) C(b,r) He_{a+b−2r} per
// direction. Exact; throws TruncationError if the product degree exceeds the
// output cap (the larger input cap).
[[nodiscard]] inline ChaosVector pointwise_product(const ChaosVector& phi, const ChaosVector& psi) {
    phi.check_compatible(psi);
    const std::size_t d = phi.basis_dim();
    const std::size_t N = std::max(phi.max_degree(), psi.max_degree());
    if (!phi.is_zero() && !psi.is_zero() && phi.degree() + psi.degree() > N)
        throw TruncationError("pointwise_product: degree " + std::to_string(phi.degree() + psi.degree()) +
                              " exceeds cap " + std::to_string(N));
    std::map<Exponents, cplx> c;
    for (std::size_t n = 0; n <= phi.max_degree(); ++n)
        for (const auto& [ia, va] : phi.kernel(n)) {
            const auto ea = to_exponents(ia, d);
            const cplx ca = multiplicity(ea) * va;
            for (std::size_t m = 0; m <= psi.max_degree(); ++m)
                for (const auto& [ib, vb] : psi.kernel(m)) {
                    const auto eb = to_exponents(ib, d);
                    const cplx cab = ca * multiplicity(eb) * vb;
                    // Enumerate r_i in [0, min(a_i, b_i)] for every direction.
                    Exponents r(d, 0);
                    while (true) {
                        double w = 1.0;
                        Exponents out(d);
                        for (std::size_t i = 0; i < d; ++i) {
                            w *= factorial(r[i]) * binomial(ea[i], r[i]) * binomial(eb[i], r[i]);
                            out[i] = static_cast<std::uint8_t>(ea[i] + eb[i] - 2 * r[i]);
                        }
                        c[out] += w * cab;
                        std::size_t i = 0;
                        while (i < d && r[i] == std::min(ea[i], eb[i])) r[i++] = 0;
                        if (i == d) break;
                        ++r[i];
                    }
                }
        }
    ChaosVector out(d, N);
    for (const auto& [e, v] : c) out.set(from_exponents(e), v / multiplicity(e));
    return out;
}

}  // namespace silt::chaos
