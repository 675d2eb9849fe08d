#pragma once

// Thin adaptive-quadrature layer over Boost.Math's Gauss-Kronrod rule.
// Every silt quadrature goes through integrate() so tolerances and
// failure reporting are uniform.

#include "silt/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace silt::quad {

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    unsigned max_depth = 18;
};

struct Result {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
    double l1 = 0.0;     // integral of |f|
    bool converged = true;

    [[nodiscard]] double relative_error() const {
        return l1 > 0.0 ? error / l1 : error;
    }
};

template <class F>
Result integrate_unchecked(F&& f, double a, double b, const Options& opt = {}) {
    Result r;
    if (a == b) return r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, opt.max_depth, opt.rel_tol, &r.error, &r.l1);
    r.converged = r.error <= std::max(opt.rel_tol * r.l1, opt.abs_tol) * 1.0001 ||
                  r.error <= 64 * std::numeric_limits<double>::epsilon() * r.l1;
    return r;
}

// Throws NumericError when the error estimate misses the requested tolerance.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {},
                 const char* context = "quadrature") {
    Result r = integrate_unchecked(std::forward<F>(f), a, b, opt);
    if (!r.converged) {
        throw NumericError(std::string(context) + " did not converge", r.relative_error());
    }
    return r;
}

// Maps theta in [0,1] onto u in [0,T] with u = T sin^2(pi theta / 2).
// The Jacobian vanishes linearly at both ends, which removes the
// inverse-square-root endpoint singularities of the bridge integrands.
struct SineSquaredMap {
    double T;

    [[nodiscard]] double u(double theta) const {
        const double s = std::sin(0.5 * M_PI * theta);
        return T * s * s;
    }
    [[nodiscard]] double jacobian(double theta) const {
        return 0.5 * M_PI * T * std::sin(M_PI * theta);
    }
};

}  // namespace silt::quad
