#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace raftedge {

namespace detail {

template <typename F>
double simpson(F&& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-9, int max_depth = 50) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Same, but with interior breakpoints the integrand is known to vary sharply around.
/// Breakpoints outside (a, b) are ignored.
template <typename F>
double integrate_with_breakpoints(F&& f, double a, double b, std::span<const double> breaks,
                                  double tol = 1e-9, int max_depth = 50) {
    std::vector<double> knots;
    knots.push_back(a);
    for (double x : breaks) {
        if (x > a && x < b) knots.push_back(x);
    }
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());
    double sum = 0.0;
    const double piece_tol = tol / static_cast<double>(knots.size());
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        sum += integrate(f, knots[i], knots[i + 1], piece_tol, max_depth);
    }
    return sum;
}

}  // namespace raftedge
