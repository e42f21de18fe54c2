#pragma once

#include <cmath>
#include <functional>

namespace selrelay {

/// Adaptive Simpson integration to an absolute tolerance. Serves as the
/// independent numeric route the closed forms are checked against; kept
/// deliberately free of any closed-form shortcuts.
namespace detail {

inline double simpson_step(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(F&& f, double a, double m, double b, double fa, double fm, double fb, double whole,
             double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_step(a, m, fa, flm, fm);
    const double right = simpson_step(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12, int max_depth = 48) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = detail::simpson_step(a, b, fa, fm, fb);
    return detail::adapt(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
}

} // namespace selrelay
