#pragma once

// Dense complex tensors over a d-dimensional basis, row-major.

#include "silt/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace silt::chaos {

using cplx = std::complex<double>;
using BasisVector = Eigen::VectorXcd;

class Tensor {
public:
    Tensor(std::size_t dim, std::size_t order) : dim_(dim), order_(order) {
        if (dim == 0) throw InputError("Tensor: dimension must be positive");
        std::size_t n = 1;
        for (std::size_t k = 0; k < order; ++k) n *= dim;
        data_.assign(n, cplx{0.0, 0.0});
    }

    static Tensor scalar(std::size_t dim, cplx v) {
        Tensor t(dim, 0);
        t.data_[0] = v;
        return t;
    }

    static Tensor vector(const BasisVector& v) {
        Tensor t(static_cast<std::size_t>(v.size()), 1);
        for (Eigen::Index i = 0; i < v.size(); ++i) t.data_[static_cast<std::size_t>(i)] = v[i];
        return t;
    }

    // v ⊗ v ⊗ ... ⊗ v (n factors)
    static Tensor power(const BasisVector& v, std::size_t n) {
        Tensor t = scalar(static_cast<std::size_t>(v.size()), 1.0);
        const Tensor w = vector(v);
        for (std::size_t k = 0; k < n; ++k) t = outer(t, w);
        return t;
    }

    static Tensor outer(const Tensor& a, const Tensor& b) {
        if (a.dim_ != b.dim_) throw InputError("Tensor::outer: dimension mismatch");
        Tensor t(a.dim_, a.order_ + b.order_);
        const std::size_t nb = b.data_.size();
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            for (std::size_t j = 0; j < nb; ++j) t.data_[i * nb + j] = a.data_[i] * b.data_[j];
        return t;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t order() const noexcept { return order_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] cplx& operator[](std::size_t flat) { return data_[flat]; }
    [[nodiscard]] const cplx& operator[](std::size_t flat) const { return data_[flat]; }

    [[nodiscard]] std::size_t flat(const std::vector<std::uint8_t>& idx) const {
        if (idx.size() != order_) throw InputError("Tensor: index has wrong order");
        std::size_t f = 0;
        for (auto i : idx) {
            if (i >= dim_) throw InputError("Tensor: index out of range");
            f = f * dim_ + i;
        }
        return f;
    }
    [[nodiscard]] std::vector<std::uint8_t> unflat(std::size_t f) const {
        std::vector<std::uint8_t> idx(order_);
        for (std::size_t k = order_; k-- > 0;) {
            idx[k] = static_cast<std::uint8_t>(f % dim_);
            f /= dim_;
        }
        return idx;
    }
    [[nodiscard]] cplx at(const std::vector<std::uint8_t>& idx) const { return data_[flat(idx)]; }
    cplx& at(const std::vector<std::uint8_t>& idx) { return data_[flat(idx)]; }

    [[nodiscard]] double max_abs_diff(const Tensor& o) const {
        if (o.dim_ != dim_ || o.order_ != order_) throw InputError("Tensor: shape mismatch");
        double m = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - o.data_[i]));
        return m;
    }

    // Applies the d×d matrix P to every slot: (P ⊗ ... ⊗ P) T.
    [[nodiscard]] Tensor apply_each_slot(const Eigen::MatrixXcd& P) const {
        if (static_cast<std::size_t>(P.rows()) != dim_ || static_cast<std::size_t>(P.cols()) != dim_)
            throw InputError("Tensor::apply_each_slot: matrix shape mismatch");
        Tensor cur = *this;
        std::size_t stride = data_.size();
        for (std::size_t slot = 0; slot < order_; ++slot) {
            stride /= dim_;  // stride of this slot
            Tensor next(dim_, order_);
            const std::size_t block = stride * dim_;
            for (std::size_t base = 0; base < data_.size(); base += block)
                for (std::size_t r = 0; r < stride; ++r)
                    for (std::size_t i = 0; i < dim_; ++i) {
                        cplx s{0.0, 0.0};
                        for (std::size_t j = 0; j < dim_; ++j)
                            s += P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                                 cur.data_[base + j * stride + r];
                        next.data_[base + i * stride + r] = s;
                    }
            cur = std::move(next);
        }
        return cur;
    }

private:
    std::size_t dim_;
    std::size_t order_;
    std::vector<cplx> data_;
};

// Pairs slot j of f with slot j of g for j < 2k (bilinear) and returns the
// remaining slots of f followed by those of g.
[[nodiscard]] inline Tensor contract(const Tensor& f, const Tensor& g, std::size_t k) {
    if (f.dim() != g.dim()) throw InputError("contract: dimension mismatch");
    const std::size_t c = 2 * k;
    if (f.order() < c || g.order() < c) throw InputError("contract: orders too small for 2k contraction");
    const std::size_t d = f.dim();
    std::size_t nc = 1;
    for (std::size_t i = 0; i < c; ++i) nc *= d;
    const std::size_t nf = f.size() / nc;  // remaining entries of f
    const std::size_t ng = g.size() / nc;
    Tensor out(d, f.order() + g.order() - 2 * c);
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = 0; j < ng; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t p = 0; p < nc; ++p) s += f[p * nf + i] * g[p * ng + j];
            out[i * ng + j] = s;
        }
    return out;
}

// (1/n!) Σ_σ T(i_σ(1), ..., i_σ(n)), computed as the mean over each
// permutation orbit.
[[nodiscard]] inline Tensor symmetrize(const Tensor& t) {
    std::map<std::vector<std::uint8_t>, std::pair<cplx, std::size_t>> orbit;
    for (std::size_t f = 0; f < t.size(); ++f) {
        auto idx = t.unflat(f);
        std::sort(idx.begin(), idx.end());
        auto& e = orbit[idx];
        e.first += t[f];
        ++e.second;
    }
    Tensor s(t.dim(), t.order());
    for (std::size_t f = 0; f < t.size(); ++f) {
        auto idx = t.unflat(f);
        std::sort(idx.begin(), idx.end());
        const auto& e = orbit.at(idx);
        s[f] = e.first / static_cast<double>(e.second);
    }
    return s;
}

[[nodiscard]] inline Tensor contract_symmetric(const Tensor& f, const Tensor& g, std::size_t k) {
    return symmetrize(contract(f, g, k));
}

}  // namespace silt::chaos
