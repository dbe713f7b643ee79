#pragma once

// Strongly invariant measures nu = sum_i p_i nu o tau_i^{-1}: chaos-game
// sampling, histogram transport, atom scans and exact backward orbits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ifs.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "summation.hpp"

namespace bifs {

inline constexpr std::size_t kFineBins = 4096;

struct MeasureReport {
    Interval hull{};
    std::vector<std::uint64_t> histogram;  ///< coarse bins over the hull
    std::vector<std::uint64_t> fine;       ///< kFineBins bins, used by atom_scan
    std::size_t samples = 0;
    double self_similarity_residual = 0.0;
    double max_bin_mass = 0.0;
    double support_coverage = 0.0;  ///< fraction of symbolic cells hit
    unsigned coverage_depth = 0;

    std::vector<double> masses() const {
        std::vector<double> m(histogram.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = samples ? static_cast<double>(histogram[i]) / static_cast<double>(samples) : 0.0;
        return m;
    }
};

inline std::size_t bin_index(const Interval& hull, double x, std::size_t bins) {
    const double pos = (x - hull.lo) / hull.length() * static_cast<double>(bins);
    if (!(pos > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(pos), bins - 1);
}

/// Histogram report over the hull from explicit sample points.
inline MeasureReport make_report(const Interval& hull, std::span<const double> points, std::size_t bins) {
    if (bins == 0) throw UsageError("histogram needs at least one bin");
    MeasureReport r;
    r.hull = hull;
    r.histogram.assign(bins, 0);
    r.fine.assign(kFineBins, 0);
    for (double x : points) {
        ++r.histogram[bin_index(hull, x, bins)];
        ++r.fine[bin_index(hull, x, kFineBins)];
    }
    r.samples = points.size();
    const auto top = *std::max_element(r.histogram.begin(), r.histogram.end());
    r.max_bin_mass = r.samples ? static_cast<double>(top) / static_cast<double>(r.samples) : 0.0;
    return r;
}

struct ChaosGameOptions {
    std::size_t samples = 1'000'000;
    unsigned burn_in = 1000;
    std::size_t bins = 64;
    unsigned coverage_depth = 5;
    std::size_t streams = 16;
    std::uint64_t seed = kDefaultSeed;
    /// Chain steps per recorded sample; 0 picks the smallest s with lambda^s <= 2^-20.
    unsigned stride = 0;
};

/// Consecutive chain points share all but one digit, so bin counts from the
/// raw chain are overlapping-pattern counts with inflated variance.
inline unsigned decorrelation_stride(double lambda) {
    return static_cast<unsigned>(std::ceil(20.0 * std::log(2.0) / -std::log(lambda)));
}

struct ChaosSamples {
    std::vector<double> points;
    std::vector<std::uint32_t> cells;  ///< last coverage_depth digits, most recent first
};

inline void validate_probabilities(const AffineIFS& ifs, std::span<const double> probs) {
    if (probs.size() != ifs.size()) throw UsageError("need one probability per map");
    double total = 0.0;
    for (double p : probs) {
        if (!(p > 0.0)) throw DomainError("chaos game needs every p_i > 0");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw DomainError("probabilities must sum to 1");
}

/// Iterates x <- tau_i(x), i ~ p, in independent streams; stream s starts at
/// the hull midpoint, discards burn_in points, then records every stride-th
/// point until it has its share of samples.
inline ChaosSamples chaos_game_points(const AffineIFS& ifs, std::span<const double> probs,
                                      const ChaosGameOptions& opt = {}) {
    validate_probabilities(ifs, probs);
    if (opt.streams == 0) throw UsageError("need at least one stream");
    if (opt.coverage_depth > 16) throw ResourceError("coverage depth capped at 16");
    std::vector<double> cumulative(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cumulative.begin());
    const auto n = static_cast<std::uint32_t>(ifs.size());
    std::uint32_t cell_count = 1;
    for (unsigned k = 0; k < opt.coverage_depth; ++k) cell_count *= n;

    ChaosSamples out;
    out.points.resize(opt.samples);
    out.cells.resize(opt.samples);
    const std::size_t base = opt.samples / opt.streams;
    const std::size_t extra = opt.samples % opt.streams;
    const std::size_t stride = opt.stride ? opt.stride : decorrelation_stride(ifs.lambda());
    parallel_for(opt.streams, [&](std::size_t s) {
        const std::size_t begin = s * base + std::min(s, extra);
        const std::size_t count = base + (s < extra ? 1 : 0);
        CounterRng rng(opt.seed, s);
        const Interval h = ifs.hull();
        double x = 0.5 * (h.lo + h.hi);
        std::uint32_t cell = 0;
        const std::size_t steps = opt.burn_in + count * stride;
        for (std::size_t t = 0; t < steps; ++t) {
            const double u = rng.uniform();
            std::size_t i = 0;
            while (i + 1 < cumulative.size() && u >= cumulative[i]) ++i;
            x = tau_apply(ifs, i, x);
            cell = (cell / n) + static_cast<std::uint32_t>(i) * (cell_count / n);
            if (t >= opt.burn_in && (t + 1 - opt.burn_in) % stride == 0) {
                const std::size_t slot = begin + (t - opt.burn_in) / stride;
                out.points[slot] = x;
                out.cells[slot] = cell;
            }
        }
    });
    return out;
}

/// Histogram report of the chaos game with symbolic coverage.
inline MeasureReport chaos_game(const AffineIFS& ifs, std::span<const double> probs,
                                const ChaosGameOptions& opt = {}) {
    const ChaosSamples s = chaos_game_points(ifs, probs, opt);
    MeasureReport r = make_report(ifs.hull(), s.points, opt.bins);
    std::size_t cell_count = 1;
    for (unsigned k = 0; k < opt.coverage_depth; ++k) cell_count *= ifs.size();
    std::vector<char> hit(cell_count, 0);
    for (auto c : s.cells) hit[c] = 1;
    r.coverage_depth = opt.coverage_depth;
    r.support_coverage = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(cell_count);
    return r;
}

/// nu((-inf, x]) for the measure with uniform density inside each bin.
inline double histogram_cdf(const Interval& hull, std::span<const double> masses, double x) {
    if (x <= hull.lo) return 0.0;
    if (x >= hull.hi) return 1.0;
    const double pos = (x - hull.lo) / hull.length() * static_cast<double>(masses.size());
    const auto i = std::min(static_cast<std::size_t>(pos), masses.size() - 1);
    CompensatedSum s;
    for (std::size_t k = 0; k < i; ++k) s.add(masses[k]);
    s.add(masses[i] * (pos - static_cast<double>(i)));
    return s.value();
}

/// max over bins E of |nu(E) - sum_i p_i nu(tau_i^{-1} E)| for bin masses.
inline double self_similarity_residual(const Interval& hull, std::span<const double> masses, const AffineIFS& ifs,
                                       std::span<const double> probs) {
    validate_probabilities(ifs, probs);
    const std::size_t bins = masses.size();
    // Prefix sums make each interval mass O(1).
    std::vector<double> prefix(bins + 1, 0.0);
    CompensatedSum run;
    for (std::size_t k = 0; k < bins; ++k) {
        run.add(masses[k]);
        prefix[k + 1] = run.value();
    }
    auto cdf = [&](double x) {
        if (x <= hull.lo) return 0.0;
        if (x >= hull.hi) return prefix[bins];
        const double pos = (x - hull.lo) / hull.length() * static_cast<double>(bins);
        const auto i = std::min(static_cast<std::size_t>(pos), bins - 1);
        return prefix[i] + masses[i] * (pos - static_cast<double>(i));
    };
    const double width = hull.length() / static_cast<double>(bins);
    double worst = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
        const double a = hull.lo + width * static_cast<double>(k);
        const double b = k + 1 == bins ? hull.hi : a + width;
        double pushed = 0.0;
        for (std::size_t i = 0; i < ifs.size(); ++i) {
            // tau_i is increasing, so tau_i^{-1}[a, b] = [tau_i^{-1} a, tau_i^{-1} b].
            pushed += probs[i] * (cdf(tau_inverse(ifs, i, b)) - cdf(tau_inverse(ifs, i, a)));
        }
        worst = std::max(worst, std::fabs(masses[k] - pushed));
    }
    return worst;
}

inline double self_similarity_residual(MeasureReport& report, const AffineIFS& ifs, std::span<const double> probs) {
    const auto m = report.masses();
    report.self_similarity_residual = self_similarity_residual(report.hull, m, ifs, probs);
    return report.self_similarity_residual;
}

/// max_k |count_k / (samples / bins) - 1|.
inline double uniformity_deviation(const MeasureReport& report) {
    const double expected = static_cast<double>(report.samples) / static_cast<double>(report.histogram.size());
    double worst = 0.0;
    for (auto c : report.histogram) worst = std::max(worst, std::fabs(static_cast<double>(c) / expected - 1.0));
    return worst;
}

// --- atom scan ------------------------------------------------------------

inline constexpr unsigned kAtomScanMinLevel = 4;
inline constexpr unsigned kAtomScanMaxLevel = 12;
inline constexpr double kAtomMassThreshold = 0.05;
inline constexpr double kPlateauRatio = 0.75;
inline constexpr unsigned kPlateauLevels = 3;

struct AtomScan {
    std::vector<unsigned> levels;     ///< k, with 2^k bins
    std::vector<double> max_mass;
    std::vector<double> ratios;       ///< max_mass[j + 1] / max_mass[j]
    bool atom_suspect = false;
    bool halving = false;             ///< every ratio within [0.4, 0.6]
};

/// Max bin mass at 2^k bins, k = 4..12, merged from the fine histogram. An
/// atom is suspected when the max stays above 0.05 and shrinks by less than
/// a quarter per refinement over at least three consecutive levels.
inline AtomScan atom_scan(const MeasureReport& report) {
    if (report.samples < 100'000) throw UsageError("atom scan needs at least 1e5 samples");
    AtomScan scan;
    for (unsigned k = kAtomScanMinLevel; k <= kAtomScanMaxLevel; ++k) {
        const std::size_t bins = std::size_t{1} << k;
        const std::size_t group = kFineBins / bins;
        std::uint64_t top = 0;
        for (std::size_t b = 0; b < bins; ++b) {
            std::uint64_t c = 0;
            for (std::size_t j = 0; j < group; ++j) c += report.fine[b * group + j];
            top = std::max(top, c);
        }
        scan.levels.push_back(k);
        scan.max_mass.push_back(static_cast<double>(top) / static_cast<double>(report.samples));
    }
    scan.halving = true;
    unsigned run = scan.max_mass.front() > kAtomMassThreshold ? 1 : 0;
    for (std::size_t j = 0; j + 1 < scan.max_mass.size(); ++j) {
        const double ratio = scan.max_mass[j + 1] / scan.max_mass[j];
        scan.ratios.push_back(ratio);
        if (ratio < 0.4 || ratio > 0.6) scan.halving = false;
        // run counts consecutive levels above the threshold joined by plateau ratios.
        if (scan.max_mass[j + 1] > kAtomMassThreshold)
            run = (run > 0 && ratio >= kPlateauRatio) ? run + 1 : 1;
        else
            run = 0;
        if (run >= kPlateauLevels) scan.atom_suspect = true;
    }
    return scan;
}

// --- backward orbits ------------------------------------------------------

inline constexpr unsigned kMaxBackwardDepth = 20;

/// Number of distinct points tau_{w_n}^{-1} ... tau_{w_1}^{-1} x over all words
/// of length n, in exact arithmetic.
inline std::size_t backward_orbit_count(const AffineIFS& ifs, const Rational& x, unsigned n) {
    if (!ifs.is_exact()) throw UsageError("backward orbits need an exact lambda and exact digits");
    if (n > kMaxBackwardDepth) throw ResourceError("backward orbit depth capped at " + std::to_string(kMaxBackwardDepth));
    std::set<Rational> level{x};
    for (unsigned k = 0; k < n; ++k) {
        std::set<Rational> next;
        for (const auto& y : level)
            for (std::size_t i = 0; i < ifs.size(); ++i) next.insert(tau_inverse_exact(ifs, i, y));
        level = std::move(next);
    }
    return level.size();
}

}  // namespace bifs
