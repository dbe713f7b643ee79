#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "errors.hpp"
#include "summation.hpp"

namespace bifs {

struct SimpsonOptions {
    double rel_tol = 1e-8;
    /// Absolute floor on the per-panel tolerance.
    double abs_floor = 1e-15;
    unsigned max_depth = 40;
};

struct QuadratureResult {
    double value = 0.0;
    std::size_t evaluations = 0;
    std::size_t panels = 0;
};

namespace detail {

template <class F>
double simpson_refine(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                      unsigned depth, const SimpsonOptions& opt, std::size_t& evals) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    evals += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= opt.max_depth)
        throw NumericError("adaptive Simpson did not converge on [" + std::to_string(a) + ", " + std::to_string(b) +
                           "], last correction " + std::to_string(delta));
    return simpson_refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, opt, evals) +
           simpson_refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, opt, evals);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] split into equal panels no wider than max_panel.
/// Each panel refines until successive estimates differ by less than rel_tol
/// relative to the panel estimate (or abs_floor).
template <class F>
QuadratureResult integrate_panels(const F& f, double a, double b, double max_panel, const SimpsonOptions& opt = {}) {
    QuadratureResult r;
    if (b <= a) return r;
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
    r.panels = panels;
    CompensatedSum total;
    const double h = (b - a) / static_cast<double>(panels);
    double x0 = a;
    double f0 = f(x0);
    ++r.evaluations;
    for (std::size_t k = 0; k < panels; ++k) {
        const double x1 = k + 1 == panels ? b : a + h * static_cast<double>(k + 1);
        const double xm = 0.5 * (x0 + x1);
        const double fm = f(xm);
        const double f1 = f(x1);
        r.evaluations += 2;
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        const double tol = std::fmax(opt.rel_tol * std::fabs(whole), opt.abs_floor);
        total.add(detail::simpson_refine(f, x0, x1, f0, fm, f1, whole, tol, 0, opt, r.evaluations));
        x0 = x1;
        f0 = f1;
    }
    r.value = total.value();
    return r;
}

}  // namespace bifs
