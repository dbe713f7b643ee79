#pragma once

// Path measures P_x on {0, 1/4}^N with transition weights W(tau_i .), their
// atoms, and the harmonic functions h0 = P_x(N_0), h1 = P_x(N_1).

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cycles.hpp"
#include "errors.hpp"
#include "fourier.hpp"
#include "ifs.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "summation.hpp"
#include "transfer.hpp"

namespace bifs {

struct PathMeasureQuery {
    double x = 0.0;
    WeightFn weight;
    unsigned depth = 1;
    std::uint64_t seed = kDefaultSeed;
    double mass_floor = kDefaultMassFloor;

    PathMeasureQuery(double x0, WeightFn w, unsigned d = 1, std::uint64_t s = kDefaultSeed,
                     double floor = kDefaultMassFloor)
        : x(x0), weight(std::move(w)), depth(d), seed(s), mass_floor(floor) {
        if (depth < 1) throw UsageError("path query depth must be >= 1");
        if (!weight.ifs().hull().contains(x, 1e-9))
            throw DomainError("x = " + std::to_string(x) + " outside the attractor hull");
    }
};

struct HarmonicEvaluation {
    double value = 0.0;
    std::vector<double> partial_sums;  ///< index k: words of length <= k
    double tail_bound = 1.0;           ///< 1 - value
    double pruned_mass = 0.0;
    bool outside_hypothesis = false;
};

/// W^w(x) = prod_k W(tau_{w_k} ... tau_{w_1} x).
inline double cylinder_prob(const PathMeasureQuery& q, const Word& w) {
    double y = q.x;
    double p = 1.0;
    for (unsigned letter : w) {
        y = tau_apply(q.weight.ifs(), letter, y);
        p *= q.weight(y);
    }
    return p;
}

/// tau_w x applied letter by letter, first letter innermost.
inline double path_point(const AffineIFS& ifs, double x, const Word& w) {
    for (unsigned letter : w) x = tau_apply(ifs, letter, x);
    return x;
}

namespace detail {

inline void require_bernoulli(const PathMeasureQuery& q) {
    if (!q.weight.is_bernoulli()) throw UsageError("atoms and harmonic functions need the Bernoulli weight");
}

inline FourierProduct path_fourier(const PathMeasureQuery& q) {
    return FourierProduct(q.weight.ifs().ratio(), 1e-12, TailPolicy::closed_form);
}

}  // namespace detail

/// Tail product G(y) = prod_{k >= 1} W(tau_{1/4}^k y). For lambda in D the
/// factors are cos^2(2 pi lambda^j (y - c)) with c = lambda/(4(1-lambda)), so
/// G(y) = |nu_hat(y - c)|^2. Otherwise W(c) < 1 and G is the product of the
/// first `depth` factors, which decays to 0.
inline double cycle_tail_product(const PathMeasureQuery& q, double y) {
    const double l = q.weight.lambda();
    if (exceptional_set_check(q.weight.ifs().ratio()).in_d) {
        const double c = l / (4.0 * (1.0 - l));
        return nu_hat_squared(detail::path_fourier(q), y - c);
    }
    double p = 1.0;
    for (unsigned k = 0; k < q.depth && p > 0.0; ++k) {
        y = l * (y + 0.25);
        p *= q.weight(y);
    }
    return p;
}

/// P_x({w 000...}) = W^w(x) |nu_hat(tau_w x)|^2.
inline double atom_prob_tail_zero(const PathMeasureQuery& q, const Word& w) {
    detail::require_bernoulli(q);
    const double m = cylinder_prob(q, w);
    if (m == 0.0) return 0.0;
    return m * nu_hat_squared(detail::path_fourier(q), path_point(q.weight.ifs(), q.x, w));
}

/// P_x({w c c c ...}) for the constant tail in letter c (0 or 1 = the digit 1/4).
inline double atom_prob_tail_cycle(const PathMeasureQuery& q, const Word& w, unsigned cycle_letter) {
    detail::require_bernoulli(q);
    if (cycle_letter == 0) return atom_prob_tail_zero(q, w);
    if (cycle_letter != 1) throw UsageError("cycle letter must be 0 or 1");
    const double m = cylinder_prob(q, w);
    if (m == 0.0) return 0.0;
    return m * cycle_tail_product(q, path_point(q.weight.ifs(), q.x, w));
}

struct HarmonicPair {
    HarmonicEvaluation h0;
    HarmonicEvaluation h1;
};

namespace detail {

struct PathNode {
    double y;
    double mass;
    unsigned len;
};

/// Depth-first walk over the word tree in the same order as the W_0 series
/// (1/4-child first); every layer sum sees its terms in the same sequence.
inline HarmonicPair harmonic_walk(const PathMeasureQuery& q, bool with_h1) {
    require_bernoulli(q);
    if (q.depth > kMaxSeriesDepth) throw ResourceError("series depth capped at " + std::to_string(kMaxSeriesDepth));
    const WeightFn& w = q.weight;
    const double l = w.lambda();
    const FourierProduct fp = path_fourier(q);
    const unsigned depth = q.depth;
    std::vector<CompensatedSum> layers0(depth + 1), layers1(depth + 1);
    layers0[0].add(nu_hat_squared(fp, q.x));
    if (with_h1) layers1[0].add(cycle_tail_product(q, q.x));
    double pruned = 0.0;
    std::vector<PathNode> stack{{q.x, 1.0, 0}};
    while (!stack.empty()) {
        const PathNode node = stack.back();
        stack.pop_back();
        if (node.len == depth) continue;
        const double y1 = l * (node.y + 0.25);
        const double m1 = node.mass * w(y1);
        const double y0 = l * node.y;
        const double m0 = node.mass * w(y0);
        const unsigned next = node.len + 1;
        // Pruned mass counts as the W_0 series counts it: a cut 1/4-child at
        // every level, a cut 0-child only while it still has descendants.
        if (m1 >= q.mass_floor)
            layers0[next].add(m1 * nu_hat_squared(fp, y1));
        else
            pruned += m1;
        if (with_h1 && m0 >= q.mass_floor) layers1[next].add(m0 * cycle_tail_product(q, y0));
        if (next == depth) continue;
        if (m0 >= q.mass_floor)
            stack.push_back({y0, m0, next});
        else
            pruned += m0;
        if (m1 >= q.mass_floor) stack.push_back({y1, m1, next});
    }
    const bool in_d = exceptional_set_check(w.ifs().ratio()).in_d;
    auto finish = [&](std::vector<CompensatedSum>& layers, bool outside) {
        HarmonicEvaluation e;
        e.partial_sums.reserve(layers.size());
        double running = 0.0;
        for (auto& layer : layers) {
            running += layer.value();
            e.partial_sums.push_back(running);
        }
        e.value = running;
        e.tail_bound = 1.0 - running;
        e.pruned_mass = pruned;
        e.outside_hypothesis = outside;
        return e;
    };
    HarmonicPair r;
    r.h0 = finish(layers0, false);
    if (with_h1) r.h1 = finish(layers1, !in_d);
    return r;
}

}  // namespace detail

inline HarmonicEvaluation h0(const PathMeasureQuery& q) { return detail::harmonic_walk(q, false).h0; }

inline HarmonicEvaluation h1(const PathMeasureQuery& q) {
    if (!exceptional_set_check(q.weight.ifs().ratio()).in_d)
        throw DomainError("h1 exists only for lambda in {1 - 1/(2n)}: otherwise the only W-cycle is {0}");
    return detail::harmonic_walk(q, true).h1;
}

/// h0 and, for lambda in D, h1 from a single traversal.
inline HarmonicPair harmonic_pair(const PathMeasureQuery& q) {
    return detail::harmonic_walk(q, exceptional_set_check(q.weight.ifs().ratio()).in_d);
}

/// h0 through the telescoped identity
///   1 = f(x) + sum_{n >= 0} R_W^n g(x),   g(y) = W(tau_{1/4} y) f(tau_{1/4} y),
/// with each R_W^n evaluated exhaustively by ruelle_iterate.
inline double h0_telescoped(const PathMeasureQuery& q) {
    detail::require_bernoulli(q);
    const FourierProduct fp = detail::path_fourier(q);
    const WeightFn& w = q.weight;
    const double l = w.lambda();
    auto g = [&](double y) {
        const double z = l * (y + 0.25);
        return w(z) * nu_hat_squared(fp, z);
    };
    CompensatedSum s;
    s.add(nu_hat_squared(fp, q.x));
    for (unsigned n = 0; n < q.depth; ++n) s.add(ruelle_iterate(w, g, q.x, n));
    return s.value();
}

struct AtomicityReport {
    double mass_in_n0 = 0.0;
    double mass_in_n1 = 0.0;
    double residual = 1.0;
    bool in_d = false;
};

inline AtomicityReport atomicity_report(const PathMeasureQuery& q) {
    const HarmonicPair p = harmonic_pair(q);
    AtomicityReport r;
    r.in_d = exceptional_set_check(q.weight.ifs().ratio()).in_d;
    r.mass_in_n0 = p.h0.value;
    r.mass_in_n1 = r.in_d ? p.h1.value : 0.0;
    r.residual = 1.0 - r.mass_in_n0 - r.mass_in_n1;
    return r;
}

// --- sampling -----------------------------------------------------------------

inline constexpr double kZeroTransition = 1e-15;

struct SampledPath {
    Word letters;
    std::vector<double> weights;  ///< W at each step's chosen image point
    double point = 0.0;           ///< tau_w x
    bool jittered = false;        ///< a step had all transition weights numerically 0
};

/// One path of P_x drawn from RNG stream (q.seed, stream).
inline SampledPath sample_path(const PathMeasureQuery& q, unsigned length, std::uint64_t stream = 0) {
    if (length < 1) throw UsageError("path length must be >= 1");
    const AffineIFS& ifs = q.weight.ifs();
    CounterRng rng(q.seed, stream);
    SampledPath path;
    path.letters.reserve(length);
    path.weights.reserve(length);
    std::vector<double> probs(ifs.size());
    double y = q.x;
    for (unsigned step = 0; step < length; ++step) {
        double total = 0.0;
        for (std::size_t i = 0; i < ifs.size(); ++i) {
            double p = q.weight(tau_apply(ifs, i, y));
            if (p < kZeroTransition) p = 0.0;
            probs[i] = p;
            total += p;
        }
        std::size_t pick = ifs.size() - 1;
        if (total == 0.0) {
            path.jittered = true;
            pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(ifs.size()));
        } else {
            double u = rng.uniform() * total;
            for (std::size_t i = 0; i < ifs.size(); ++i) {
                if (probs[i] > 0.0 && u < probs[i]) {
                    pick = i;
                    break;
                }
                u -= probs[i];
            }
            while (probs[pick] == 0.0) --pick;  // u landed on the rounding edge
        }
        y = tau_apply(ifs, pick, y);
        path.letters.push_back(static_cast<unsigned>(pick));
        path.weights.push_back(probs[pick]);
    }
    path.point = y;
    return path;
}

/// `count` independent paths; path k uses stream k.
inline std::vector<SampledPath> sample_paths(const PathMeasureQuery& q, unsigned length, std::size_t count) {
    std::vector<SampledPath> out(count);
    parallel_for(count, [&](std::size_t k) { out[k] = sample_path(q, length, k); });
    return out;
}

}  // namespace bifs
