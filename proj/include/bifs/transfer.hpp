#pragma once

// Normalized weight functions W and the Ruelle operator
//   (R_W f)(x) = sum_i W(tau_i x) f(tau_i x).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "ifs.hpp"
#include "random.hpp"
#include "summation.hpp"

namespace bifs {

inline constexpr unsigned kDefaultTreeCap = 25;

/// Weight W : R -> [0, 1] attached to an IFS. The Bernoulli weight
/// W(x) = cos^2(2 pi x / lambda) on L(lambda) is evaluated inline; any other
/// weight goes through a callable.
class WeightFn {
public:
    enum class Kind { bernoulli, custom };

    /// cos^2(2 pi x / lambda) on the dual system L(lambda) = {0, 1/4}.
    static WeightFn bernoulli(const ScalarParam& lambda) {
        WeightFn w(AffineIFS::dual(lambda));
        w.kind_ = Kind::bernoulli;
        w.freq_ = 2.0 * std::numbers::pi / lambda.value();
        w.name_ = "bernoulli";
        // Zeros (lambda/2)(1/2 + n) inside the hull.
        const double top = w.ifs_.hull().hi;
        for (unsigned n = 0;; ++n) {
            const double z = 0.5 * lambda.value() * (0.5 + n);
            if (z > top + kFloatEqualityTol) break;
            w.zeros_.push_back(z);
        }
        return w;
    }

    static WeightFn constant(AffineIFS ifs, double c) {
        WeightFn w(std::move(ifs));
        w.fn_ = [c](double) { return c; };
        w.name_ = "constant";
        return w;
    }

    static WeightFn custom(AffineIFS ifs, std::function<double(double)> fn, std::vector<double> zeros = {},
                           std::string name = "custom") {
        WeightFn w(std::move(ifs));
        w.fn_ = std::move(fn);
        w.zeros_ = std::move(zeros);
        w.name_ = std::move(name);
        return w;
    }

    /// Raw formula value, no clamping.
    double raw(double x) const {
        if (kind_ == Kind::bernoulli) {
            const double c = std::cos(freq_ * x);
            return c * c;
        }
        return fn_(x);
    }

    /// W(x) clamped to [0, 1].
    double operator()(double x) const { return std::clamp(raw(x), 0.0, 1.0); }

    Kind kind() const { return kind_; }
    bool is_bernoulli() const { return kind_ == Kind::bernoulli; }
    const AffineIFS& ifs() const { return ifs_; }
    double lambda() const { return ifs_.lambda(); }
    const std::vector<double>& zeros() const { return zeros_; }
    const std::string& name() const { return name_; }

private:
    explicit WeightFn(AffineIFS ifs) : ifs_(std::move(ifs)) {}

    AffineIFS ifs_;
    Kind kind_ = Kind::custom;
    double freq_ = 0.0;
    std::function<double(double)> fn_;
    std::vector<double> zeros_;
    std::string name_;
};

inline double weight_eval(const WeightFn& w, double x) { return w(x); }

/// max over the grid of |sum_i W(tau_i x) - 1|.
inline double check_normalization(const WeightFn& w, std::span<const double> grid) {
    const AffineIFS& ifs = w.ifs();
    double worst = 0.0;
    for (double x : grid) {
        double s = 0.0;
        for (std::size_t i = 0; i < ifs.size(); ++i) s += w.raw(tau_apply(ifs, i, x));
        worst = std::max(worst, std::fabs(s - 1.0));
    }
    return worst;
}

template <class F>
double ruelle_apply(const WeightFn& w, F&& f, double x) {
    const AffineIFS& ifs = w.ifs();
    double s = 0.0;
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        const double y = tau_apply(ifs, i, x);
        s += w(y) * f(y);
    }
    return s;
}

namespace detail {

template <class F>
void ruelle_tree(const WeightFn& w, const F& f, double y, double weight, unsigned remaining, CompensatedSum& acc) {
    if (remaining == 0) {
        acc.add(weight * f(y));
        return;
    }
    const AffineIFS& ifs = w.ifs();
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        const double z = tau_apply(ifs, i, y);
        const double wz = weight * w(z);
        if (wz == 0.0) continue;
        ruelle_tree(w, f, z, wz, remaining - 1, acc);
    }
}

}  // namespace detail

/// (R_W^n f)(x) as the exhaustive sum over all words of length n:
/// sum_w W^w(x) f(tau_w x).
template <class F>
double ruelle_iterate(const WeightFn& w, F&& f, double x, unsigned n, unsigned cap = kDefaultTreeCap) {
    if (n > cap)
        throw ResourceError("ruelle_iterate depth " + std::to_string(n) + " exceeds exhaustive tree cap " +
                            std::to_string(cap) + "; use ruelle_iterate_mc");
    CompensatedSum acc;
    detail::ruelle_tree(w, f, x, 1.0, n, acc);
    return acc.value();
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// (R_W^n f)(x) = E[f(tau_w x)] with w drawn from the path measure P_x.
/// Path k uses the RNG stream (seed, k).
template <class F>
MonteCarloEstimate ruelle_iterate_mc(const WeightFn& w, F&& f, double x, unsigned n, std::size_t samples,
                                     std::uint64_t seed = kDefaultSeed) {
    if (samples < 2) throw UsageError("Monte Carlo estimate needs at least two samples");
    const AffineIFS& ifs = w.ifs();
    std::vector<double> probs(ifs.size());
    CompensatedSum sum, sum_sq;
    for (std::size_t k = 0; k < samples; ++k) {
        CounterRng rng(seed, k);
        double y = x;
        for (unsigned step = 0; step < n; ++step) {
            double total = 0.0;
            for (std::size_t i = 0; i < ifs.size(); ++i) total += probs[i] = w(tau_apply(ifs, i, y));
            double u = rng.uniform() * total;
            std::size_t pick = ifs.size() - 1;
            for (std::size_t i = 0; i < ifs.size(); ++i) {
                if (u < probs[i]) {
                    pick = i;
                    break;
                }
                u -= probs[i];
            }
            y = tau_apply(ifs, pick, y);
        }
        const double v = f(y);
        sum.add(v);
        sum_sq.add(v * v);
    }
    MonteCarloEstimate est;
    est.samples = samples;
    est.mean = sum.value() / static_cast<double>(samples);
    const double var = std::max(0.0, sum_sq.value() / static_cast<double>(samples) - est.mean * est.mean);
    est.std_error = std::sqrt(var * static_cast<double>(samples) / static_cast<double>(samples - 1) /
                              static_cast<double>(samples));
    return est;
}

/// max over the grid of |R_W h - h|.
template <class H>
double harmonic_residual(const WeightFn& w, H&& h, std::span<const double> grid) {
    double worst = 0.0;
    for (double x : grid) worst = std::max(worst, std::fabs(ruelle_apply(w, h, x) - h(x)));
    return worst;
}

/// `points` equally spaced values from lo to hi inclusive.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    if (points == 0) return {};
    if (points == 1) return {lo};
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    g.back() = hi;
    return g;
}

}  // namespace bifs
