#pragma once

// Affine iterated function systems on the line: tau_b(x) = lambda * (x + b).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "scalar.hpp"

namespace bifs {

/// Finite string of digit indices. Letter j of a word is applied j-th when
/// following a path, so the encoded point is tau_{w_1}(tau_{w_2}(...)).
using Word = std::vector<unsigned>;

struct Digit {
    double value = 0.0;
    std::optional<Rational> exact;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

class AffineIFS {
public:
    AffineIFS(ScalarParam ratio, std::vector<Digit> digits, std::string name = "custom")
        : ratio_(std::move(ratio)), digits_(std::move(digits)), name_(std::move(name)) {
        if (digits_.empty()) throw UsageError("an IFS needs at least one digit");
        for (std::size_t i = 0; i < digits_.size(); ++i)
            for (std::size_t j = i + 1; j < digits_.size(); ++j)
                if (digits_[i].value == digits_[j].value)
                    throw UsageError("IFS digits must be pairwise distinct");
    }

    /// Digits given as doubles; exact only if every digit is rational and lambda is too.
    static AffineIFS with_digits(ScalarParam ratio, const std::vector<double>& values,
                                 std::string name = "custom") {
        std::vector<Digit> d;
        d.reserve(values.size());
        for (double v : values) d.push_back({v, std::nullopt});
        return AffineIFS(std::move(ratio), std::move(d), std::move(name));
    }

    static AffineIFS with_exact_digits(ScalarParam ratio, const std::vector<Rational>& values,
                                       std::string name = "custom") {
        std::vector<Digit> d;
        d.reserve(values.size());
        for (const auto& v : values) d.push_back({to_double(v), v});
        return AffineIFS(std::move(ratio), std::move(d), std::move(name));
    }

    /// B = {0, 1}.
    static AffineIFS binary(const ScalarParam& lambda) {
        return with_exact_digits(lambda, {Rational(0), Rational(1)}, "B01");
    }

    /// L(lambda) = {0, 1/4}; letter 0 is tau_0, letter 1 is tau_{1/4}.
    static AffineIFS dual(const ScalarParam& lambda) {
        return with_exact_digits(lambda, {Rational(0), make_rational(1, 4)}, "L");
    }

    /// B(lambda) = {-1/lambda, +1/lambda}, i.e. tau_-(x) = lambda x - 1 and tau_+(x) = lambda x + 1.
    /// Letter 0 is tau_-, letter 1 is tau_+.
    static AffineIFS bernoulli(const ScalarParam& lambda) {
        if (lambda.is_exact()) {
            const Rational inv = 1 / lambda.rational();
            return with_exact_digits(lambda, {-inv, inv}, "B");
        }
        const double inv = 1.0 / lambda.value();
        return with_digits(lambda, {-inv, inv}, "B");
    }

    const ScalarParam& ratio() const { return ratio_; }
    double lambda() const { return ratio_.value(); }
    std::size_t size() const { return digits_.size(); }
    const std::string& name() const { return name_; }
    const std::vector<Digit>& digits() const { return digits_; }

    const Digit& digit(std::size_t index) const {
        if (index >= digits_.size())
            throw UsageError("digit index " + std::to_string(index) + " out of range for " +
                             std::to_string(digits_.size()) + "-map system");
        return digits_[index];
    }

    /// True when lambda and every digit carry exact rationals.
    bool is_exact() const {
        return ratio_.is_exact() &&
               std::all_of(digits_.begin(), digits_.end(), [](const Digit& d) { return d.exact.has_value(); });
    }

    const Rational& exact_digit(std::size_t index) const {
        const Digit& d = digit(index);
        if (!d.exact) throw UsageError("digit has no exact value");
        return *d.exact;
    }

    /// Convex hull of the attractor: [lambda min(B), lambda max(B)] / (1 - lambda).
    Interval hull() const {
        if (is_exact()) {
            auto [lo, hi] = std::minmax_element(digits_.begin(), digits_.end(),
                                                [](const Digit& a, const Digit& b) { return *a.exact < *b.exact; });
            const Rational s = ratio_.rational() / (1 - ratio_.rational());
            return {to_double(s * *lo->exact), to_double(s * *hi->exact)};
        }
        auto [lo, hi] = std::minmax_element(digits_.begin(), digits_.end(),
                                            [](const Digit& a, const Digit& b) { return a.value < b.value; });
        const double s = lambda() / (1.0 - lambda());
        return {s * lo->value, s * hi->value};
    }

private:
    ScalarParam ratio_;
    std::vector<Digit> digits_;
    std::string name_;
};

inline double tau_apply(const AffineIFS& ifs, std::size_t index, double x) {
    return ifs.lambda() * (x + ifs.digit(index).value);
}

inline double tau_inverse(const AffineIFS& ifs, std::size_t index, double x) {
    return x / ifs.lambda() - ifs.digit(index).value;
}

inline Rational tau_apply_exact(const AffineIFS& ifs, std::size_t index, const Rational& x) {
    return ifs.ratio().rational() * (x + ifs.exact_digit(index));
}

inline Rational tau_inverse_exact(const AffineIFS& ifs, std::size_t index, const Rational& x) {
    return x / ifs.ratio().rational() - ifs.exact_digit(index);
}

/// sum_{j=1..k} lambda^j b_{w_j}; the empty word encodes 0.
inline double encode_finite(const AffineIFS& ifs, const Word& w) {
    double x = 0.0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) x = tau_apply(ifs, *it, x);
    return x;
}

inline Rational encode_finite_exact(const AffineIFS& ifs, const Word& w) {
    Rational x = 0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) x = tau_apply_exact(ifs, *it, x);
    return x;
}

/// Point with encoding w w w ...: the fixed point of tau_{w_1} o ... o tau_{w_p}.
inline double encode_periodic(const AffineIFS& ifs, const Word& w) {
    if (w.empty()) throw UsageError("encode_periodic needs a non-empty word");
    return encode_finite(ifs, w) / (1.0 - std::pow(ifs.lambda(), static_cast<double>(w.size())));
}

inline Rational encode_periodic_exact(const AffineIFS& ifs, const Word& w) {
    if (w.empty()) throw UsageError("encode_periodic needs a non-empty word");
    const Rational& lam = ifs.ratio().rational();
    Rational lam_p = 1;
    for (std::size_t i = 0; i < w.size(); ++i) lam_p *= lam;
    return encode_finite_exact(ifs, w) / (1 - lam_p);
}

/// Number of distinct points among the 2^n (or N^n) encodings of length-n words.
/// Exact arithmetic; requires an exact system.
inline std::size_t distinct_encodings_exact(const AffineIFS& ifs, unsigned length) {
    if (!ifs.is_exact()) throw UsageError("distinct_encodings_exact requires exact lambda and digits");
    std::vector<Rational> level{Rational(0)};
    for (unsigned k = 0; k < length; ++k) {
        std::vector<Rational> next;
        next.reserve(level.size() * ifs.size());
        for (const auto& x : level)
            for (std::size_t i = 0; i < ifs.size(); ++i) next.push_back(tau_apply_exact(ifs, i, x));
        level = std::move(next);
    }
    std::set<Rational> distinct(level.begin(), level.end());
    return distinct.size();
}

// --- attractor geometry -------------------------------------------------------

enum class AttractorKind { interval, cantor };

struct AttractorDescription {
    AttractorKind kind = AttractorKind::interval;
    Interval hull;
    /// Set when kind == cantor.
    std::optional<double> hausdorff_dim;
};

/// Two-digit systems only: interval iff lambda >= 1/2.
inline AttractorDescription attractor_describe(const AffineIFS& ifs) {
    if (ifs.size() != 2)
        throw UnsupportedConfiguration("attractor classification is implemented for two-digit systems only");
    AttractorDescription d;
    d.hull = ifs.hull();
    const bool at_least_half =
        ifs.ratio().is_exact() ? ifs.ratio().rational() * 2 >= 1 : ifs.lambda() >= 0.5;
    if (at_least_half) {
        d.kind = AttractorKind::interval;
    } else {
        d.kind = AttractorKind::cantor;
        d.hausdorff_dim = std::log(2.0) / std::log(1.0 / ifs.lambda());
    }
    return d;
}

/// The depth-n cover: tau_w(hull) for every word of length n, in lexicographic word order.
inline std::vector<Interval> attractor_cover(const AffineIFS& ifs, unsigned depth) {
    if (depth > 24) throw ResourceError("attractor cover depth capped at 24");
    const Interval h = ifs.hull();
    const double scale = std::pow(ifs.lambda(), static_cast<double>(depth));
    std::vector<Interval> cells;
    Word w(depth, 0);
    const std::size_t n = ifs.size();
    std::size_t total = 1;
    for (unsigned k = 0; k < depth; ++k) total *= n;
    cells.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (unsigned k = depth; k-- > 0;) {
            w[k] = static_cast<unsigned>(c % n);
            c /= n;
        }
        const double base = encode_finite(ifs, w);
        cells.push_back({base + scale * h.lo, base + scale * h.hi});
    }
    return cells;
}

/// Total length of the removed middle gaps of the B={0,1} Cantor construction,
/// first gap lambda(1-2lambda)/(1-lambda) repeated 2^k times at scale lambda^k.
inline double cantor_gap_sum(const ScalarParam& lambda) {
    const double l = lambda.value();
    if (lambda.is_exact() ? lambda.rational() * 2 >= 1 : l >= 0.5)
        throw DomainError("gap sum needs lambda < 1/2");
    const double first_gap = l * (1.0 - 2.0 * l) / (1.0 - l);
    return first_gap / (1.0 - 2.0 * l);
}

inline Rational cantor_gap_sum_exact(const Rational& lambda) {
    if (lambda * 2 >= 1 || lambda <= 0) throw DomainError("gap sum needs 0 < lambda < 1/2");
    const Rational first_gap = lambda * (1 - 2 * lambda) / (1 - lambda);
    return first_gap / (1 - 2 * lambda);
}

// --- lambda-representations ---------------------------------------------------

/// Largest integer a with a < 1/(1 - lambda).
inline unsigned representation_alphabet_max(const ScalarParam& lambda) {
    if (lambda.is_exact()) {
        const Rational bound = 1 / (1 - lambda.rational());
        BigInt fl = numerator(bound) / denominator(bound);
        if (is_integer(bound)) fl -= 1;
        return fl.convert_to<unsigned>();
    }
    const double bound = 1.0 / (1.0 - lambda.value());
    double fl = std::floor(bound);
    if (fl == bound) fl -= 1.0;
    return static_cast<unsigned>(fl);
}

/// First k digits of x = sum_j w_j lambda^j produced by the fractional-part map
/// r(y) = <y / lambda>, w_j = floor(r^{j-1}(x) / lambda).
inline std::vector<unsigned> lambda_representation(const ScalarParam& lambda, double x, unsigned k) {
    if (k == 0) throw UsageError("lambda_representation needs k >= 1");
    const double l = lambda.value();
    const double top = l / (1.0 - l);
    if (!(x >= -kFloatEqualityTol && x <= top + kFloatEqualityTol))
        throw DomainError("x outside [0, lambda/(1-lambda)]");
    x = std::clamp(x, 0.0, top);
    std::vector<unsigned> digits;
    digits.reserve(k);
    double r = x;
    for (unsigned j = 0; j < k; ++j) {
        const double scaled = r / l;
        const double d = std::floor(scaled);
        digits.push_back(static_cast<unsigned>(d));
        r = scaled - d;
    }
    return digits;
}

inline std::vector<unsigned> lambda_representation_exact(const Rational& lambda, const Rational& x, unsigned k) {
    if (k == 0) throw UsageError("lambda_representation needs k >= 1");
    if (x < 0 || x > lambda / (1 - lambda)) throw DomainError("x outside [0, lambda/(1-lambda)]");
    std::vector<unsigned> digits;
    digits.reserve(k);
    Rational r = x;
    for (unsigned j = 0; j < k; ++j) {
        const Rational scaled = r / lambda;
        const BigInt d = numerator(scaled) / denominator(scaled);
        digits.push_back(d.convert_to<unsigned>());
        r = scaled - Rational(d);
    }
    return digits;
}

// --- affine equivalence of two-digit systems ----------------------------------

struct AffineMap {
    double slope = 1.0;
    double intercept = 0.0;
    double operator()(double x) const { return slope * x + intercept; }
};

/// alpha(x) = (b - a) x + a lambda/(1 - lambda) carries the {0,1} system onto {a, b}.
inline AffineMap affine_normalize(const ScalarParam& lambda, double a, double b) {
    if (a == b) throw UsageError("degenerate digit set: a == b");
    if (a > b) throw UsageError("affine_normalize expects a < b");
    const double l = lambda.value();
    return {b - a, a * l / (1.0 - l)};
}

// --- fiber multiplicity -------------------------------------------------------

/// Number of length-n words w with x in tau_w(hull) (within eps): the prefixes
/// that can still be extended to an encoding of x. Equals 1 on the attractor
/// for injective encodings and grows with n on overlapping systems.
inline std::size_t fiber_multiplicity(const AffineIFS& ifs, double x, unsigned n, double eps = 1e-12) {
    if (n > 30) throw ResourceError("fiber_multiplicity depth capped at 30");
    const Interval h = ifs.hull();
    // Walk backwards: x in tau_w(hull) iff tau_{w_1}^{-1} x in tau_{w_2..}(hull), etc.
    std::size_t count = 0;
    std::vector<std::pair<double, unsigned>> stack{{x, 0}};
    double tol = eps;
    std::vector<double> tol_at(n + 1);
    for (unsigned k = 0; k <= n; ++k) {
        tol_at[k] = tol;
        tol /= ifs.lambda();
    }
    while (!stack.empty()) {
        auto [y, depth] = stack.back();
        stack.pop_back();
        if (!h.contains(y, tol_at[depth])) continue;
        if (depth == n) {
            ++count;
            continue;
        }
        for (std::size_t i = ifs.size(); i-- > 0;) stack.emplace_back(tau_inverse(ifs, i, y), depth + 1);
    }
    return count;
}

}  // namespace bifs
