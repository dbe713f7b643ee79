#pragma once

// Cycles of an IFS, W-cycle certificates and the exceptional parameter set
// D = {1 - 1/(2n) : n >= 1}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ifs.hpp"
#include "rational.hpp"
#include "scalar.hpp"
#include "transfer.hpp"

namespace bifs {

inline constexpr unsigned kDefaultCycleCap = 12;
inline constexpr double kWCycleTol = 1e-9;

/// Lyndon words (aperiodic, lexicographically least among their rotations)
/// of length 1..max_len over {0, ..., alphabet-1}, in lexicographic order.
inline std::vector<Word> lyndon_words(unsigned alphabet, unsigned max_len) {
    std::vector<Word> out;
    if (alphabet == 0 || max_len == 0) return out;
    std::vector<int> w{-1};
    while (!w.empty()) {
        ++w.back();
        out.emplace_back(w.begin(), w.end());
        const std::size_t m = w.size();
        while (w.size() < max_len) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == static_cast<int>(alphabet) - 1) w.pop_back();
    }
    return out;
}

/// Number of Lyndon words of length p: (1/p) sum_{d | p} mu(d) k^{p/d}.
inline std::size_t necklace_count(unsigned alphabet, unsigned p) {
    auto mobius = [](unsigned n) {
        int result = 1;
        for (unsigned q = 2; q * q <= n; ++q) {
            if (n % q == 0) {
                n /= q;
                if (n % q == 0) return 0;
                result = -result;
            }
        }
        if (n > 1) result = -result;
        return result;
    };
    long long total = 0;
    for (unsigned d = 1; d <= p; ++d) {
        if (p % d != 0) continue;
        long long pw = 1;
        for (unsigned i = 0; i < p / d; ++i) pw *= alphabet;
        total += mobius(d) * pw;
    }
    return static_cast<std::size_t>(total / p);
}

/// Smallest period q dividing w.size() with w equal to its rotation by q.
inline std::size_t minimal_period(const Word& w) {
    const std::size_t n = w.size();
    for (std::size_t q = 1; q <= n; ++q) {
        if (n % q != 0) continue;
        bool ok = true;
        for (std::size_t i = 0; i + q < n && ok; ++i) ok = w[i] == w[i + q];
        if (ok) return q;
    }
    return n;
}

inline Word rotate_left(const Word& w, std::size_t k) {
    Word r(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) r[i] = w[(i + k) % w.size()];
    return r;
}

inline Word least_rotation(const Word& w) {
    Word best = w;
    for (std::size_t k = 1; k < w.size(); ++k) best = std::min(best, rotate_left(w, k));
    return best;
}

/// A p-cycle generated by a Lyndon word w. points[0] is the point with
/// encoding w^infinity; points[k] = tau_{w_{p-k+1}}(points[k-1]), so the
/// orbit walks the word from its last letter back to the first and closes.
struct Cycle {
    Word word;
    std::vector<double> points;
    std::optional<std::vector<Rational>> exact_points;
    std::size_t minimal_period = 0;
};

inline Cycle make_cycle(const AffineIFS& ifs, const Word& generator) {
    if (generator.empty()) throw UsageError("a cycle needs a non-empty word");
    Cycle c;
    c.word = least_rotation(generator);
    c.minimal_period = minimal_period(c.word);
    c.word.resize(c.minimal_period);
    const std::size_t p = c.minimal_period;
    // Rotation by p-k to the left puts letters w_{p-k+1} .. w_p in front.
    for (std::size_t k = 0; k < p; ++k) c.points.push_back(encode_periodic(ifs, rotate_left(c.word, (p - k) % p)));
    if (ifs.is_exact()) {
        std::vector<Rational> pts;
        pts.reserve(p);
        for (std::size_t k = 0; k < p; ++k) pts.push_back(encode_periodic_exact(ifs, rotate_left(c.word, (p - k) % p)));
        c.exact_points = std::move(pts);
    }
    return c;
}

/// Applies tau_{w_p}, ..., tau_{w_1} to points[0] and reports the distance
/// back to the start (0 exactly on the exact path).
inline double orbit_closure_error(const AffineIFS& ifs, const Cycle& c) {
    double y = c.points.front();
    for (std::size_t k = c.word.size(); k-- > 0;) y = tau_apply(ifs, c.word[k], y);
    return std::fabs(y - c.points.front());
}

inline bool orbit_closes_exact(const AffineIFS& ifs, const Cycle& c) {
    if (!c.exact_points) throw UsageError("cycle has no exact points");
    Rational y = c.exact_points->front();
    for (std::size_t k = c.word.size(); k-- > 0;) y = tau_apply_exact(ifs, c.word[k], y);
    return y == c.exact_points->front();
}

/// One Cycle per necklace class of minimal period p <= p_max, ordered by
/// period and then lexicographically.
inline std::vector<Cycle> enumerate_cycles(const AffineIFS& ifs, unsigned p_max, unsigned cap = kDefaultCycleCap) {
    if (p_max < 1) throw UsageError("enumerate_cycles needs p_max >= 1");
    if (p_max > cap)
        throw ResourceError("cycle period " + std::to_string(p_max) + " exceeds cap " + std::to_string(cap));
    auto words = lyndon_words(static_cast<unsigned>(ifs.size()), p_max);
    std::stable_sort(words.begin(), words.end(),
                     [](const Word& a, const Word& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
    std::vector<Cycle> cycles;
    cycles.reserve(words.size());
    for (const auto& w : words) cycles.push_back(make_cycle(ifs, w));
    return cycles;
}

// --- W-cycle certificates ----------------------------------------------------

struct DivisibilityRecord {
    bool divisible = false;
    BigInt numerator;    ///< b (w_1 b^{p-1} + w_2 b^{p-2} a + ... + w_p a^{p-1})
    BigInt denominator;  ///< 2 (b^p - a^p)
    BigInt gcd;          ///< gcd(numerator, denominator)
    Rational value;      ///< numerator / denominator = 2x/lambda for x = pi(w^infinity)
    bool input_normalized = false;
    std::string note;
};

/// Exact test of 2x/lambda in Z for x = pi(w^infinity) on L(a/b), with w over {0, 1}.
/// In integers: 2(b^p - a^p) divides b * sum_i w_i b^{p-i} a^{i-1}.
inline DivisibilityRecord exact_wcycle_divisibility(BigInt a, BigInt b, const Word& w) {
    if (w.empty()) throw UsageError("divisibility test needs a non-empty word");
    if (a <= 0 || b <= 0 || a >= b) throw DomainError("need positive integers a < b");
    for (unsigned letter : w)
        if (letter > 1) throw UsageError("divisibility test expects letters in {0, 1}");
    DivisibilityRecord rec;
    const BigInt g = boost::multiprecision::gcd(a, b);
    if (g != 1) {
        rec.input_normalized = true;
        rec.note = "reduced " + a.str() + "/" + b.str() + " by gcd " + g.str();
        a /= g;
        b /= g;
    }
    const std::size_t p = w.size();
    BigInt sum = 0;
    for (std::size_t i = 0; i < p; ++i) {
        if (w[i] == 0) continue;
        sum += boost::multiprecision::pow(b, static_cast<unsigned>(p - 1 - i)) *
               boost::multiprecision::pow(a, static_cast<unsigned>(i));
    }
    rec.numerator = b * sum;
    rec.denominator = 2 * (boost::multiprecision::pow(b, static_cast<unsigned>(p)) -
                           boost::multiprecision::pow(a, static_cast<unsigned>(p)));
    rec.gcd = boost::multiprecision::gcd(rec.numerator, rec.denominator);
    rec.value = Rational(rec.numerator, rec.denominator);
    rec.divisible = rec.numerator % rec.denominator == 0;
    return rec;
}

inline DivisibilityRecord exact_wcycle_divisibility(const Rational& lambda, const Word& w) {
    return exact_wcycle_divisibility(numerator(lambda), denominator(lambda), w);
}

enum class CertificateMode { exact, numerical };

struct WCycleCertificate {
    Cycle cycle;
    bool is_w_cycle = false;
    CertificateMode mode = CertificateMode::numerical;
    std::vector<double> weights;      ///< W at each orbit point
    std::vector<bool> point_passes;   ///< W(y) = 1 at each orbit point, under the chosen mode
};

/// Exact path when the weight is the Bernoulli weight with rational lambda and
/// the cycle carries exact points (W(y) = 1 iff 2y/lambda is an integer);
/// otherwise |W(y) - 1| <= tol at every orbit point.
inline WCycleCertificate certify_w_cycle(const Cycle& c, const WeightFn& w, double tol = kWCycleTol) {
    WCycleCertificate cert;
    cert.cycle = c;
    const bool exact = w.is_bernoulli() && w.ifs().ratio().is_exact() && c.exact_points.has_value();
    cert.mode = exact ? CertificateMode::exact : CertificateMode::numerical;
    cert.is_w_cycle = true;
    for (std::size_t k = 0; k < c.points.size(); ++k) {
        const double wy = w(c.points[k]);
        cert.weights.push_back(wy);
        bool pass = false;
        if (exact)
            pass = is_integer(2 * (*c.exact_points)[k] / w.ifs().ratio().rational());
        else
            pass = std::fabs(wy - 1.0) <= tol;
        cert.point_passes.push_back(pass);
        cert.is_w_cycle = cert.is_w_cycle && pass;
    }
    return cert;
}

// --- exceptional set D ------------------------------------------------------

struct ExceptionalCheck {
    bool in_d = false;
    std::optional<unsigned> n;
    bool exact = false;
};

/// lambda in D = {1 - 1/(2n)}. For lambda = a/b in lowest terms this holds
/// iff b - a = 1 and b is even (n = b/2); floats are scanned with tolerance 1e-10.
inline ExceptionalCheck exceptional_set_check(const ScalarParam& lambda) {
    ExceptionalCheck r;
    if (lambda.is_exact()) {
        r.exact = true;
        const BigInt a = numerator(lambda.rational());
        const BigInt b = denominator(lambda.rational());
        if (b - a == 1 && b % 2 == 0) {
            r.in_d = true;
            r.n = static_cast<unsigned>(b / 2);
        }
        return r;
    }
    const double l = lambda.value();
    const auto n_max = static_cast<unsigned>(std::ceil(1.0 / (2.0 * (1.0 - l)))) + 1;
    for (unsigned n = 1; n <= n_max; ++n) {
        if (std::fabs(l - (1.0 - 1.0 / (2.0 * n))) <= 1e-10) {
            r.in_d = true;
            r.n = n;
            break;
        }
    }
    return r;
}

// --- long W-cycles ------------------------------------------------------------

struct LongCycleReport {
    CertificateMode mode = CertificateMode::numerical;
    unsigned p_max = 0;
    std::size_t cycles_checked = 0;                 ///< cycles of minimal period 2..p_max
    std::vector<WCycleCertificate> w_one_cycles;    ///< period-1 W-cycles
    std::vector<WCycleCertificate> violations;      ///< W-cycles of period >= 2
    bool float_agrees = true;                       ///< tolerance path matches the exact path (exact mode only)
    bool holds() const { return violations.empty(); }
};

/// Certifies that no cycle of minimal period 2..p_max on the weight's IFS is a
/// W-cycle, and lists the period-1 W-cycles.
inline LongCycleReport verify_no_long_wcycles(const WeightFn& w, unsigned p_max, double tol = kWCycleTol,
                                              unsigned cap = kDefaultCycleCap) {
    LongCycleReport rep;
    rep.p_max = p_max;
    const auto cycles = enumerate_cycles(w.ifs(), p_max, cap);
    const bool exact = w.is_bernoulli() && w.ifs().is_exact();
    rep.mode = exact ? CertificateMode::exact : CertificateMode::numerical;
    for (const auto& c : cycles) {
        auto cert = certify_w_cycle(c, w, tol);
        if (exact) {
            // Independent check: the divisibility criterion on every rotation,
            // and the tolerance test on every point.
            const std::size_t p = c.word.size();
            bool all_divisible = true;
            bool all_float = true;
            for (std::size_t k = 0; k < p; ++k) {
                const Word rot = rotate_left(c.word, (p - k) % p);
                const bool div = exact_wcycle_divisibility(w.ifs().ratio().rational(), rot).divisible;
                if (div != static_cast<bool>(cert.point_passes[k])) rep.float_agrees = false;
                if (div != (std::fabs(cert.weights[k] - 1.0) <= tol)) rep.float_agrees = false;
                all_divisible = all_divisible && div;
                all_float = all_float && std::fabs(cert.weights[k] - 1.0) <= tol;
            }
            if (all_divisible != cert.is_w_cycle || all_float != cert.is_w_cycle) rep.float_agrees = false;
        }
        if (c.minimal_period == 1) {
            if (cert.is_w_cycle) rep.w_one_cycles.push_back(std::move(cert));
            continue;
        }
        ++rep.cycles_checked;
        if (cert.is_w_cycle) rep.violations.push_back(std::move(cert));
    }
    return rep;
}

}  // namespace bifs
