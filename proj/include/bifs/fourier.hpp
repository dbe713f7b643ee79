#pragma once

// Fourier transform of the Bernoulli convolution nu_lambda,
//   nu_hat(t) = prod_{n >= 0} cos(2 pi lambda^n t),
// the identity sum_{w in W_0} W^w(x) |nu_hat(tau_w x)|^2 = 1, the CDF of
// nu_lambda, and the Cesaro means used by Wiener's atom test.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cycles.hpp"
#include "errors.hpp"
#include "ifs.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "scalar.hpp"
#include "summation.hpp"
#include "transfer.hpp"

namespace bifs {

enum class TailPolicy {
    /// Explicit factors while the angle is >= 0.1, then the remaining
    /// geometric tail in closed form through the series of log cos.
    closed_form,
    /// Plain truncation after N factors, N the smallest n with
    /// pi^2 lambda^{2n} t^2 / (1 - lambda^2) <= tail_eps.
    truncate,
};

struct FourierProduct {
    ScalarParam lambda;
    double tail_eps = 1e-12;
    TailPolicy tail = TailPolicy::closed_form;

    explicit FourierProduct(ScalarParam l, double eps = 1e-12, TailPolicy policy = TailPolicy::closed_form)
        : lambda(std::move(l)), tail_eps(eps), tail(policy) {}
};

struct NuHat {
    double value = 1.0;
    double error_bound = 0.0;
    unsigned terms = 0;  ///< explicit cosine factors evaluated
};

inline constexpr double kUnitRoundoff = 0x1.0p-53;

namespace detail {

inline constexpr double kClosureAngle = 0.1;

// -log cos u = sum_k c_k u^{2k}.
inline constexpr std::array<double, 7> kLogCosCoeff = {
    1.0 / 2.0, 1.0 / 12.0, 1.0 / 45.0, 17.0 / 2520.0, 31.0 / 14175.0, 691.0 / 467775.0, 10922.0 / 42567525.0};

/// prod_{n >= 0} cos(u ratio^n) for |u| < kClosureAngle, with the bound on
/// the dropped part of the log series.
inline double geometric_cos_tail(double u, double ratio, double* remainder = nullptr) {
    const double u2 = u * u;
    const double r2 = ratio * ratio;
    double upow = u2;
    double rpow = r2;
    double log_prod = 0.0;
    for (std::size_t k = 0; k + 1 < kLogCosCoeff.size(); ++k) {
        log_prod -= kLogCosCoeff[k] * upow / (1.0 - rpow);
        upow *= u2;
        rpow *= r2;
    }
    // Last coefficient bounds the rest: c_{k+1} < c_k / 2 for these terms.
    const double last = kLogCosCoeff.back() * upow / (1.0 - rpow);
    log_prod -= last;
    if (remainder) *remainder = last;
    return std::exp(log_prod);
}

/// Absolute error contributed by the factor cos(u_k): u_k carries k + 2
/// roundings, and cos and the product one more each. |d cos| <= |du| and every
/// other factor is at most 1 in size.
inline double factor_rounding(double u, unsigned k) {
    return (std::fabs(u) * (k + 2) + 2.0) * kUnitRoundoff;
}

}  // namespace detail

inline unsigned nu_hat_truncation_terms(const FourierProduct& fp, double t) {
    const double l = fp.lambda.value();
    const double c = std::numbers::pi * std::numbers::pi * t * t / (1.0 - l * l);
    unsigned n = 0;
    double l2n = 1.0;
    while (c * l2n > fp.tail_eps) {
        l2n *= l * l;
        ++n;
    }
    return n;
}

inline NuHat nu_hat(const FourierProduct& fp, double t) {
    const double l = fp.lambda.value();
    const double u0 = 2.0 * std::numbers::pi * t;
    NuHat r;
    if (fp.tail == TailPolicy::truncate) {
        const unsigned n = nu_hat_truncation_terms(fp, t);
        double p = 1.0;
        double u = u0;
        double rounding = 0.0;
        for (unsigned k = 0; k < n; ++k) {
            p *= std::cos(u);
            rounding += detail::factor_rounding(u, k);
            u *= l;
        }
        r.value = p;
        r.terms = n;
        // |prod_{k>=N} cos - 1| <= sum_{k>=N} u_k^2 / 2 <= 2 tail_eps.
        r.error_bound = 2.0 * fp.tail_eps * std::fabs(p) + rounding;
        return r;
    }
    double p = 1.0;
    double u = u0;
    unsigned n = 0;
    double rounding = 0.0;
    while (std::fabs(u) >= detail::kClosureAngle) {
        p *= std::cos(u);
        rounding += detail::factor_rounding(u, n);
        u *= l;
        ++n;
    }
    double rem = 0.0;
    p *= detail::geometric_cos_tail(u, l, &rem);
    r.value = p;
    r.terms = n;
    r.error_bound = 2.0 * rem * std::fabs(p) + rounding + 16.0 * kUnitRoundoff;
    return r;
}

inline double nu_hat_squared(const FourierProduct& fp, double t) {
    const double v = nu_hat(fp, t).value;
    return v * v;
}

/// |nu_hat(t) - cos(2 pi t) nu_hat(lambda t)|.
inline double scaling_identity_residual(const FourierProduct& fp, double t) {
    const double lhs = nu_hat(fp, t).value;
    const double rhs = std::cos(2.0 * std::numbers::pi * t) * nu_hat(fp, fp.lambda.value() * t).value;
    return std::fabs(lhs - rhs);
}

// --- W_0 series -------------------------------------------------------------

/// Prefix mass below which a subtree of the word tree is skipped. Skipped mass
/// is recorded and always lands in the reported tail 1 - (partial sum).
inline constexpr double kDefaultMassFloor = 1e-9;
inline constexpr unsigned kMaxSeriesDepth = 64;

struct SeriesOptions {
    double mass_floor = kDefaultMassFloor;
    TailPolicy tail = TailPolicy::closed_form;
};

/// Partial sums of sum_{w in W_0, |w| <= depth} W^w(x) f(tau_w x), where W_0
/// is the empty word together with all words ending in the letter 1/4.
struct IdentitySeries {
    std::vector<double> partial_sums;  ///< index k: all words of length <= k
    double value = 0.0;
    double tail = 1.0;                 ///< 1 - value
    double pruned_mass = 0.0;
    bool outside_hypothesis = false;   ///< lambda in D
};

namespace detail {

template <class F>
struct W0Walker {
    const WeightFn& w;
    const F& f;
    double lambda;
    unsigned depth;
    double floor;
    std::vector<CompensatedSum>& layers;
    double pruned = 0.0;

    void visit(double y, double mass, unsigned len) {
        if (len == depth) return;
        const double y1 = lambda * (y + 0.25);
        const double m1 = mass * w(y1);
        const double y0 = lambda * y;
        const double m0 = mass * w(y0);
        if (m1 >= floor) {
            layers[len + 1].add(m1 * f(y1));
            visit(y1, m1, len + 1);
        } else {
            pruned += m1;
        }
        if (len + 1 == depth) return;  // a trailing 0 contributes nothing
        if (m0 >= floor)
            visit(y0, m0, len + 1);
        else
            pruned += m0;
    }
};

}  // namespace detail

/// Generic W_0 series for the Bernoulli weight with an arbitrary f.
template <class F>
IdentitySeries w0_series(const WeightFn& w, const F& f, double x, unsigned depth, const SeriesOptions& opt = {}) {
    if (!w.is_bernoulli()) throw UsageError("the W_0 series is defined for the Bernoulli weight");
    if (depth > kMaxSeriesDepth) throw ResourceError("series depth capped at " + std::to_string(kMaxSeriesDepth));
    std::vector<CompensatedSum> layers(depth + 1);
    layers[0].add(f(x));
    detail::W0Walker<F> walker{w, f, w.lambda(), depth, opt.mass_floor, layers};
    walker.visit(x, 1.0, 0);
    IdentitySeries s;
    s.partial_sums.reserve(depth + 1);
    double running = 0.0;
    for (auto& layer : layers) {
        running += layer.value();
        s.partial_sums.push_back(running);
    }
    s.value = running;
    s.tail = 1.0 - running;
    s.pruned_mass = walker.pruned;
    s.outside_hypothesis = exceptional_set_check(w.ifs().ratio()).in_d;
    return s;
}

inline void require_in_dual_hull(const ScalarParam& lambda, double x) {
    const double top = lambda.value() / (4.0 * (1.0 - lambda.value()));
    if (x < -1e-9 || x > top + 1e-9)
        throw DomainError("x = " + std::to_string(x) + " outside [0, lambda/(4(1-lambda))]");
}

/// The W_0 series with f = |nu_hat|^2.
inline IdentitySeries functional_identity_partial(const ScalarParam& lambda, double x, unsigned depth,
                                                  const SeriesOptions& opt = {}) {
    require_in_dual_hull(lambda, x);
    const WeightFn w = WeightFn::bernoulli(lambda);
    const FourierProduct fp(lambda, 1e-12, opt.tail);
    auto f = [&fp](double y) { return nu_hat_squared(fp, y); };
    return w0_series(w, f, x, depth, opt);
}

// --- uniqueness probe ---------------------------------------------------------

struct UniquenessProbe {
    double height = 0.0;
    double first_order_change = 0.0;  ///< max_x height * S_d(bump)(x)
    double residual_shift = 0.0;      ///< max_x S_d(f + height bump)(x) - S_d(f)(x)
    double base_tail = 0.0;           ///< max_x 1 - S_d(f)(x)
    bool detected = false;
    bool outside_hypothesis = false;
};

/// Smooth bump with peak 1 at `center`, supported on (center - radius, center + radius).
inline double smooth_bump(double y, double center, double radius) {
    const double s = (y - center) / radius;
    if (std::fabs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

/// Perturbs f = |nu_hat|^2 by height * bump (bump centered mid-hull, radius a
/// quarter of the hull) and measures how far the W_0 series moves. Every term
/// is nonnegative and f satisfies the identity, so S(f + h bump)(x) - 1 is at
/// least the depth-d shift; the probe reports the shift against the
/// first-order prediction h S_d(bump).
inline UniquenessProbe identity_uniqueness_probe(const ScalarParam& lambda, double height, unsigned depth,
                                                 std::size_t grid_points = 11, const SeriesOptions& opt = {}) {
    const double top = lambda.value() / (4.0 * (1.0 - lambda.value()));
    const double center = 0.5 * top;
    const double radius = 0.25 * top;
    const WeightFn w = WeightFn::bernoulli(lambda);
    const FourierProduct fp(lambda, 1e-12, opt.tail);
    auto f = [&fp](double y) { return nu_hat_squared(fp, y); };
    auto bump = [=](double y) { return smooth_bump(y, center, radius); };
    auto g = [&](double y) { return f(y) + height * bump(y); };
    UniquenessProbe probe;
    probe.height = height;
    probe.outside_hypothesis = exceptional_set_check(lambda).in_d;
    for (double x : uniform_grid(0.0, top, grid_points)) {
        const double base = w0_series(w, f, x, depth, opt).value;
        const double perturbed = w0_series(w, g, x, depth, opt).value;
        const double first = height * w0_series(w, bump, x, depth, opt).value;
        probe.base_tail = std::max(probe.base_tail, 1.0 - base);
        probe.residual_shift = std::max(probe.residual_shift, perturbed - base);
        probe.first_order_change = std::max(probe.first_order_change, first);
    }
    probe.detected = probe.first_order_change > 0.0 && probe.residual_shift >= 0.5 * probe.first_order_change;
    return probe;
}

// --- CDF of nu_lambda -------------------------------------------------------

enum class CdfMethod { closed_form_haar, monte_carlo, fixed_point_iteration };

struct CdfOptions {
    std::size_t intervals = 4096;
    double tol = 1e-8;
    unsigned max_iterations = 20000;
    std::size_t mc_samples = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
};

/// Piecewise-linear CDF on a uniform grid over the hull
/// [-1/(1-lambda), 1/(1-lambda)]; 0 to the left, 1 to the right.
class CdfGrid {
public:
    CdfGrid(double lo, double hi, std::vector<double> values) : lo_(lo), hi_(hi), values_(std::move(values)) {}

    double operator()(double x) const {
        if (x < lo_) return 0.0;
        if (x >= hi_) return 1.0;
        const double pos = (x - lo_) / (hi_ - lo_) * static_cast<double>(values_.size() - 1);
        const auto i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
        const double frac = pos - static_cast<double>(i);
        return values_[i] + frac * (values_[i + 1] - values_[i]);
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& values() const { return values_; }

    unsigned iterations = 0;
    double last_change = 0.0;

private:
    double lo_;
    double hi_;
    std::vector<double> values_;
};

/// Iterates F <- (F((x-1)/lambda) + F((x+1)/lambda)) / 2 from the unit step at
/// 0 until the sup-norm change drops below tol.
inline CdfGrid cdf_fixed_point(const ScalarParam& lambda, const CdfOptions& opt = {}) {
    const double l = lambda.value();
    const double h = 1.0 / (1.0 - l);
    const std::size_t n = opt.intervals + 1;
    const auto xs = uniform_grid(-h, h, n);
    std::vector<double> init(n);
    for (std::size_t i = 0; i < n; ++i) init[i] = xs[i] >= 0.0 ? 1.0 : 0.0;
    CdfGrid cur(-h, h, init);
    std::vector<double> next(n);
    for (unsigned it = 1; it <= opt.max_iterations; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = 0.5 * (cur((xs[i] - 1.0) / l) + cur((xs[i] + 1.0) / l));
            change = std::max(change, std::fabs(next[i] - cur.values()[i]));
        }
        cur = CdfGrid(-h, h, next);
        cur.iterations = it;
        cur.last_change = change;
        if (change < opt.tol) return cur;
    }
    throw NumericError("CDF fixed-point iteration did not reach sup-change " + std::to_string(opt.tol));
}

/// Empirical CDF of sum_{k >= 0} +-lambda^k over independent fair signs,
/// series truncated once lambda^K / (1 - lambda) <= 1e-12.
class EmpiricalCdf {
public:
    EmpiricalCdf(const ScalarParam& lambda, std::size_t samples, std::uint64_t seed) {
        const double l = lambda.value();
        unsigned terms = 0;
        for (double tail = 1.0 / (1.0 - l); tail > 1e-12; tail *= l) ++terms;
        sorted_.reserve(samples);
        CounterRng rng(seed, 0);
        for (std::size_t s = 0; s < samples; ++s) {
            double x = 0.0;
            double pw = 1.0;
            std::uint64_t bits = 0;
            for (unsigned k = 0; k < terms; ++k) {
                if (k % 64 == 0) bits = rng.next_u64();
                x += (bits & 1u) ? pw : -pw;
                bits >>= 1;
                pw *= l;
            }
            sorted_.push_back(x);
        }
        std::sort(sorted_.begin(), sorted_.end());
    }

    double operator()(double x) const {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    const std::vector<double>& samples() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

/// F_lambda(x) = nu_lambda((-inf, x]).
inline double cdf_eval(const ScalarParam& lambda, double x, CdfMethod method, const CdfOptions& opt = {}) {
    switch (method) {
        case CdfMethod::closed_form_haar: {
            const bool half = lambda.is_exact() ? lambda.rational() == make_rational(1, 2) : lambda.value() == 0.5;
            if (!half) throw DomainError("closed-form Haar CDF exists only for lambda = 1/2");
            return std::clamp(0.25 * (x + 2.0), 0.0, 1.0);
        }
        case CdfMethod::monte_carlo:
            return EmpiricalCdf(lambda, opt.mc_samples, opt.seed)(x);
        case CdfMethod::fixed_point_iteration:
            return cdf_fixed_point(lambda, opt)(x);
    }
    throw UsageError("unknown CDF method");
}

// --- Wiener / Cesaro means --------------------------------------------------

struct WienerPoint {
    unsigned n = 0;
    double length = 0.0;  ///< L = lambda^{-n} T
    double s = 0.0;       ///< (1 / 2L) int_{-L}^{L} |nu_hat|^2
};

struct WienerOptions {
    SimpsonOptions simpson{};
    /// Panel width as a fraction of the shortest period of |nu_hat|^2 (1/2).
    double panel_fraction = 1.0 / 8.0;
    TailPolicy tail = TailPolicy::closed_form;
};

/// s(lambda^{-n} T) for n = 0..n_max. The integrand is even, so
/// s(L) = (1/L) int_0^L |nu_hat|^2; the integral grows segment by segment.
inline std::vector<WienerPoint> wiener_cesaro(const ScalarParam& lambda, double T, unsigned n_max,
                                              const WienerOptions& opt = {}) {
    if (!(T > 0.0)) throw UsageError("wiener_cesaro needs T > 0");
    const FourierProduct fp(lambda, 1e-12, opt.tail);
    auto f = [&fp](double t) { return nu_hat_squared(fp, t); };
    const double panel = opt.panel_fraction * 0.5;
    std::vector<WienerPoint> out;
    out.reserve(n_max + 1);
    CompensatedSum integral;
    double prev = 0.0;
    double length = T;
    for (unsigned n = 0; n <= n_max; ++n) {
        integral.add(integrate_panels(f, prev, length, panel, opt.simpson).value);
        out.push_back({n, length, integral.value() / length});
        prev = length;
        length /= lambda.value();
    }
    return out;
}

/// Least-squares slope of log2 s against n over n in [n_lo, n_hi].
inline double wiener_log2_slope(std::span<const WienerPoint> seq, unsigned n_lo, unsigned n_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& p : seq) {
        if (p.n < n_lo || p.n > n_hi) continue;
        const double x = p.n;
        const double y = std::log2(p.s);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) throw UsageError("slope fit needs at least two points");
    const double mm = static_cast<double>(m);
    return (mm * sxy - sx * sy) / (mm * sxx - sx * sx);
}

}  // namespace bifs
