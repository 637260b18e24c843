// quadrature.hpp — adaptive Simpson integration for real and complex integrands
#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "qosc/errors.hpp"

namespace qosc {

namespace detail {

inline double quad_abs(double x) { return std::abs(x); }
inline double quad_abs(const std::complex<double>& x) { return std::abs(x); }

// One level of Simpson bisection. `whole_scale` carries an estimate of the
// full integral's magnitude so the tolerance stays relative.
template <typename T, typename F>
T adaptive_simpson_rec(const F& f, double a, double b, T fa, T fm, T fb, T s,
                       double tol_abs, int depth, double* residual) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    const T sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T s2 = sl + sr;
    const double err = quad_abs(s2 - s);
    if (depth <= 0) {
        *residual = std::max(*residual, err / 15.0);
        return s2 + (s2 - s) / 15.0;
    }
    if (err <= 15.0 * tol_abs) {
        return s2 + (s2 - s) / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, sl, 0.5 * tol_abs, depth - 1, residual) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, sr, 0.5 * tol_abs, depth - 1, residual);
}

}  // namespace detail

// Integrate f over [a, b] to relative tolerance rel_tol. Throws NumericError
// with the achieved residual if the recursion bottoms out before converging.
template <typename T, typename F>
T adaptive_simpson(const F& f, double a, double b, double rel_tol,
                   int max_depth = 48) {
    if (a == b) return T{};
    const T fa = f(a);
    const T fb = f(b);
    const T fm = f(0.5 * (a + b));
    const T s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Relative tolerance against the crude whole-interval estimate, floored
    // so integrals that are legitimately ~0 still terminate.
    const double scale = std::max(detail::quad_abs(s), 1e-30);
    const double tol_abs = std::max(rel_tol * scale, 1e-300);
    double residual = 0.0;
    const T result = detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, s,
                                                  tol_abs, max_depth, &residual);
    if (residual > tol_abs) {
        throw NumericError("adaptive_simpson: failed to converge, achieved residual " +
                           std::to_string(residual) + " vs requested " +
                           std::to_string(tol_abs));
    }
    return result;
}

}  // namespace qosc
