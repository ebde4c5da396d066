#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "molnar/errors.hpp"

namespace molnar {

namespace detail {

template <class F, class T>
T simpson_branch(F& f, double a, double m, double b, T fa, T fm, T fb, T whole,
                 double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    // 15 = Richardson factor for Simpson's rule; the correction term below
    // upgrades the estimate to Boole accuracy on accepted intervals.
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_branch(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_branch(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// Works for real- and complex-valued integrands of a real variable.
template <class F>
auto adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
    using T = std::invoke_result_t<F&, double>;
    if (!(tol > 0.0)) throw domain_error("adaptive_simpson: tolerance must be positive");
    if (a == b) return T{};
    const double m = 0.5 * (a + b);
    const T fa = f(a);
    const T fm = f(m);
    const T fb = f(b);
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_branch(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

/// Adaptive Simpson with an initial uniform subdivision into panels no wider
/// than max_panel. Use for oscillatory or spiked integrands where a single
/// coarse estimate could silently pass the error test.
template <class F>
auto adaptive_simpson_seeded(F&& f, double a, double b, double tol, double max_panel,
                             int max_depth = 40) {
    using T = std::invoke_result_t<F&, double>;
    if (a == b) return T{};
    if (b < a) std::swap(a, b);
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
    const double h = (b - a) / panels;
    T total{};
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == panels) ? b : a + (i + 1) * h;
        total += adaptive_simpson(f, lo, hi, tol / panels, max_depth);
    }
    return total;
}

/// Quadrature over [points.front(), points.back()] split at the interior
/// points (integrand may be non-smooth there), each piece integrated
/// adaptively with a proportional share of the tolerance budget.
template <class F>
auto integrate_segmented(F&& f, const std::vector<double>& points, double tol,
                         double max_panel, int max_depth = 40) {
    using T = std::invoke_result_t<F&, double>;
    T total{};
    if (points.size() < 2) return total;
    const double span = points.back() - points.front();
    if (!(span > 0.0)) return total;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double lo = points[i];
        const double hi = points[i + 1];
        if (!(hi > lo)) continue;
        total += adaptive_simpson_seeded(f, lo, hi, tol * (hi - lo) / span, max_panel, max_depth);
    }
    return total;
}

} // namespace molnar
