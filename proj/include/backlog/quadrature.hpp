#pragma once

#include <cmath>
#include <cstddef>

namespace backlog {

struct QuadratureResult {
    double value = 0.0;
    /// Sum of the per-panel Richardson error estimates |S2 - S1| / 15.
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

struct SimpsonOptions {
    double abs_tol = 1e-10;
    int min_depth = 5;
    int max_depth = 48;
    std::size_t max_evaluations = 20'000'000;
};

namespace detail {

template <class F>
struct SimpsonState {
    F& f;
    const SimpsonOptions& opts;
    QuadratureResult result;
};

template <class F>
double simpson_panel(SimpsonState<F>& st, double a, double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    st.result.evaluations += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;

    const bool out_of_budget = st.result.evaluations >= st.opts.max_evaluations;
    if (depth >= st.opts.max_depth || out_of_budget || (depth >= st.opts.min_depth && std::abs(delta) <= 15.0 * tol)) {
        if (!(std::abs(delta) <= 15.0 * tol) || !std::isfinite(delta)) st.result.converged = false;
        st.result.error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_panel(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_panel(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson rule on [a, b]. Function values at panel ends and
/// midpoints are handed down to children, so each abscissa is evaluated once.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, const SimpsonOptions& opts = {}) {
    QuadratureResult out;
    if (a == b) return out;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    detail::SimpsonState<F> st{f, opts, {}};
    st.result.evaluations = 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double value = detail::simpson_panel(st, a, b, fa, fm, fb, whole, opts.abs_tol, 0);
    st.result.value = value;
    return st.result;
}

}  // namespace backlog
