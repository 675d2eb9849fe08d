#pragma once

// Haar basis of L²[0,T] truncated at 2^J functions:
//   e_0 = T^{−1/2},  e_{2^j + k} = 2^{j/2} T^{−1/2} (1 on the left half of
//   [k L_j, (k+1) L_j), −1 on the right half), L_j = T / 2^j, j < J.
// 1_{[0,t)} is represented exactly when t/T is a multiple of 2^{−J}.

#include "silt/chaos/tensor.hpp"
#include "silt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace silt::chaos {

class HaarBasis {
public:
    HaarBasis(double T, unsigned levels) : T_(T), levels_(levels) {
        if (!(T > 0.0)) throw InputError("HaarBasis: T must be positive");
        if (levels > 7) throw InputError("HaarBasis: at most 7 levels (dimension 128)");
    }

    [[nodiscard]] double duration() const noexcept { return T_; }
    [[nodiscard]] std::size_t dim() const noexcept { return std::size_t{1} << levels_; }

    // Normalized 1_{[0,T)}, which is e_0.
    [[nodiscard]] BasisVector eta() const {
        BasisVector v = BasisVector::Zero(static_cast<Eigen::Index>(dim()));
        v[0] = 1.0;
        return v;
    }

    [[nodiscard]] double value(std::size_t i, double s) const {
        if (i >= dim()) throw InputError("HaarBasis: index out of range");
        if (!(s >= 0.0 && s < T_)) return 0.0;
        if (i == 0) return 1.0 / std::sqrt(T_);
        const auto [j, k] = level_shift(i);
        const double L = T_ / static_cast<double>(std::size_t{1} << j);
        const double a = static_cast<double>(k) * L;
        if (s < a || s >= a + L) return 0.0;
        const double amp = std::sqrt(static_cast<double>(std::size_t{1} << j) / T_);
        return s < a + 0.5 * L ? amp : -amp;
    }

    // Coefficients ⟨1_{[0,t)}, e_i⟩.
    [[nodiscard]] BasisVector indicator(double t) const {
        if (!(t >= 0.0 && t <= T_)) throw InputError("HaarBasis::indicator: t outside [0, T]");
        BasisVector c = BasisVector::Zero(static_cast<Eigen::Index>(dim()));
        c[0] = t / std::sqrt(T_);
        for (std::size_t i = 1; i < dim(); ++i) {
            const auto [j, k] = level_shift(i);
            const double L = T_ / static_cast<double>(std::size_t{1} << j);
            const double a = static_cast<double>(k) * L;
            const double m = a + 0.5 * L;
            const double plus = std::clamp(t, a, m) - a;
            const double minus = std::clamp(t, m, a + L) - m;
            c[static_cast<Eigen::Index>(i)] = std::sqrt(static_cast<double>(std::size_t{1} << j) / T_) * (plus - minus);
        }
        return c;
    }

    [[nodiscard]] bool is_dyadic(double t) const {
        const double x = t / T_ * static_cast<double>(dim());
        return std::abs(x - std::round(x)) <= 1e-12 * std::max(1.0, x);
    }

    // ‖1_{[0,t)} − Π 1_{[0,t)}‖ in L²[0,T].
    [[nodiscard]] double projection_error(double t) const {
        const double captured = indicator(t).squaredNorm();
        return std::sqrt(std::max(0.0, t - captured));
    }

private:
    [[nodiscard]] static std::pair<unsigned, std::size_t> level_shift(std::size_t i) {
        unsigned j = 0;
        while ((std::size_t{2} << j) <= i) ++j;
        return {j, i - (std::size_t{1} << j)};
    }

    double T_;
    unsigned levels_;
};

}  // namespace silt::chaos
