// bifs: command-line front end. Each subcommand writes CSV data and a JSON
// summary with claim verdicts. Exit status: 0 all claims hold, 2 a claim
// failed, 1 usage or domain error.

#include <CLI11.hpp>
#include <json.hpp>

#include <bifs/bifs.hpp>

#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace bifs;

struct RunConfig {
    std::string command;
    std::string lambda = "1/2";
    std::string system = "B";
    unsigned depth = 0;
    unsigned max_period = 8;
    double tol = kWCycleTol;
    double tmin = 0.0;
    double tmax = 5.0;
    std::size_t samples = 0;
    std::size_t grid = 0;
    double T = 1.0;
    unsigned nmax = 10;
    double x = std::nan("");
    unsigned stride = 0;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string summary;
    std::string format = "csv";
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) {
        for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
        os_ << '\n';
    }

    template <class... T>
    void row(const T&... cells) {
        std::size_t i = 0;
        ((os_ << (i++ ? "," : "") << cell(cells)), ...);
        os_ << '\n';
    }

    std::string str() const { return os_.str(); }

private:
    static std::string cell(double v) { return num(v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class I>
        requires std::is_integral_v<I>
    static std::string cell(I v) {
        return std::to_string(v);
    }

    std::ostringstream os_;
};

struct Verdicts {
    json claims = json::array();
    json observations = json::array();
    bool all_pass = true;

    /// A consequence of a theorem that a finite computation can refute.
    void claim(const std::string& name, bool pass, double value, double tolerance, const std::string& statement) {
        claims.push_back({{"name", name}, {"pass", pass}, {"value", value}, {"tolerance", tolerance},
                          {"statement", statement}});
        all_pass = all_pass && pass;
    }

    /// A finite-depth numerical target; reported but does not set the exit code.
    void observe(const std::string& name, bool pass, double value, double threshold, const std::string& statement) {
        observations.push_back({{"name", name}, {"pass", pass}, {"value", value}, {"threshold", threshold},
                                {"statement", statement}});
    }
};

AffineIFS make_system(const std::string& name, const ScalarParam& lambda) {
    if (name == "B") return AffineIFS::bernoulli(lambda);
    if (name == "L") return AffineIFS::dual(lambda);
    if (name == "B01") return AffineIFS::binary(lambda);
    throw UsageError("unknown system '" + name + "' (expected B, L or B01)");
}

std::string word_string(const AffineIFS& ifs, const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        const auto& d = ifs.digit(w[i]);
        s += d.exact ? to_string(*d.exact) : num(d.value);
    }
    return s;
}

json input_echo(const RunConfig& c, const ScalarParam& lambda) {
    return {{"command", c.command},     {"lambda", c.lambda},    {"lambda_value", lambda.value()},
            {"lambda_exact", lambda.is_exact()}, {"system", c.system}, {"depth", c.depth},
            {"max_period", c.max_period}, {"tol", c.tol},         {"tmin", c.tmin},
            {"tmax", c.tmax},           {"samples", c.samples},  {"grid", c.grid},
            {"T", c.T},                 {"nmax", c.nmax},        {"x", std::isnan(c.x) ? json(nullptr) : json(c.x)},
            {"stride", c.stride},       {"seed", c.seed}};
}

struct Output {
    std::string csv;
    json result = json::object();
    Verdicts verdicts;
};

// --- subcommands -------------------------------------------------------------

Output cmd_attractor(const RunConfig& c, const ScalarParam& lambda) {
    const AffineIFS ifs = make_system(c.system, lambda);
    const AttractorDescription d = attractor_describe(ifs);
    Output o;
    o.result["kind"] = d.kind == AttractorKind::interval ? "interval" : "cantor";
    o.result["hull"] = {d.hull.lo, d.hull.hi};
    o.result["dim"] = d.hausdorff_dim ? json(*d.hausdorff_dim) : json(1.0);
    if (c.depth == 0) {
        Csv csv({"lo", "hi"});
        csv.row(d.hull.lo, d.hull.hi);
        o.csv = csv.str();
        return o;
    }
    const auto cover = attractor_cover(ifs, c.depth);
    Csv csv({"index", "lo", "hi"});
    for (std::size_t i = 0; i < cover.size(); ++i) csv.row(i, cover[i].lo, cover[i].hi);
    o.csv = csv.str();
    std::vector<Interval> sorted = cover;
    std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    double worst_gap = 0.0;  // > 0: a hole; < 0: overlap
    double min_gap = INFINITY;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        worst_gap = std::max(worst_gap, sorted[i + 1].lo - sorted[i].hi);
        min_gap = std::min(min_gap, sorted[i + 1].lo - sorted[i].hi);
    }
    o.result["cells"] = cover.size();
    if (d.kind == AttractorKind::interval)
        o.verdicts.claim("cover_is_connected", worst_gap <= 1e-12, worst_gap, 1e-12,
                         "for lambda >= 1/2 the depth-n images tile the hull without holes");
    else
        o.verdicts.claim("cover_cells_disjoint", min_gap > 0.0, min_gap, 0.0,
                         "for lambda < 1/2 the depth-n images are pairwise disjoint");
    return o;
}

Output cmd_cycles(const RunConfig& c, const ScalarParam& lambda) {
    const WeightFn w = WeightFn::bernoulli(lambda);
    const LongCycleReport rep = verify_no_long_wcycles(w, c.max_period, c.tol);
    const auto cycles = enumerate_cycles(w.ifs(), c.max_period);
    const ExceptionalCheck ex = exceptional_set_check(lambda);
    Output o;
    Csv csv({"period", "word", "point", "weight", "is_w_cycle"});
    json list = json::array();
    for (const auto& cy : cycles) {
        const auto cert = certify_w_cycle(cy, w, c.tol);
        for (std::size_t k = 0; k < cy.points.size(); ++k)
            csv.row(cy.minimal_period, word_string(w.ifs(), cy.word), cy.points[k], cert.weights[k],
                    cert.is_w_cycle ? 1 : 0);
        list.push_back({{"word", word_string(w.ifs(), cy.word)},
                        {"period", cy.minimal_period},
                        {"points", cy.points},
                        {"is_w_cycle", cert.is_w_cycle},
                        {"mode", cert.mode == CertificateMode::exact ? "exact" : "numerical"}});
    }
    o.csv = csv.str();
    o.result["mode"] = rep.mode == CertificateMode::exact ? "exact" : "numerical";
    o.result["in_D"] = ex.in_d;
    if (ex.n) o.result["n"] = *ex.n;
    o.result["w_one_cycles"] = rep.w_one_cycles.size();
    o.result["cycles_checked"] = rep.cycles_checked;
    o.result["cycles"] = list;
    if (c.max_period >= 2)
        o.verdicts.claim("no_w_cycles_of_period_gt_1", rep.violations.empty(),
                         static_cast<double>(rep.violations.size()), 0.0,
                         "there are no W-p-cycles for p > 1");
    o.verdicts.claim("w_one_cycles_match_D", rep.w_one_cycles.size() == (ex.in_d ? 2u : 1u),
                     static_cast<double>(rep.w_one_cycles.size()), 0.0,
                     "{1/4-fixed point} is a W-cycle iff lambda = 1 - 1/(2n)");
    if (rep.mode == CertificateMode::exact)
        o.verdicts.claim("float_certificates_agree", rep.float_agrees, rep.float_agrees ? 1.0 : 0.0, c.tol,
                         "tolerance-based certificates match the exact divisibility test");
    return o;
}

Output cmd_fourier(const RunConfig& c, const ScalarParam& lambda) {
    const FourierProduct fp(lambda);
    const std::size_t n = c.samples ? c.samples : 1000;
    Output o;
    Csv csv({"t", "nu_hat", "err_bound"});
    double max_abs = 0.0, max_odd = 0.0, max_scaling = 0.0, max_oracle = 0.0;
    const bool half = lambda.value() == 0.5;
    for (double t : uniform_grid(c.tmin, c.tmax, n)) {
        const NuHat v = nu_hat(fp, t);
        csv.row(t, v.value, v.error_bound);
        max_abs = std::max(max_abs, std::fabs(v.value));
        max_odd = std::max(max_odd, std::fabs(v.value - nu_hat(fp, -t).value));
        max_scaling = std::max(max_scaling, scaling_identity_residual(fp, t));
        if (half) {
            const double a = 4.0 * std::numbers::pi * t;
            const double oracle = t == 0.0 ? 1.0 : std::sin(a) / a;
            max_oracle = std::max(max_oracle, std::fabs(v.value - oracle));
        }
    }
    o.csv = csv.str();
    o.verdicts.claim("bounded_by_one", max_abs <= 1.0, max_abs, 0.0, "|nu_hat(t)| <= 1");
    o.verdicts.claim("even", max_odd <= 1e-15, max_odd, 1e-15, "nu_hat(-t) = nu_hat(t)");
    o.verdicts.claim("scaling_identity", max_scaling <= 1e-10, max_scaling, 1e-10,
                     "nu_hat(t) = cos(2 pi t) nu_hat(lambda t)");
    if (half)
        o.verdicts.claim("uniform_measure_oracle", max_oracle <= 1e-8, max_oracle, 1e-8,
                         "lambda = 1/2: nu_hat(t) = sin(4 pi t) / (4 pi t)");
    return o;
}

double dual_top(const ScalarParam& lambda) { return lambda.value() / (4.0 * (1.0 - lambda.value())); }

Output cmd_identity(const RunConfig& c, const ScalarParam& lambda) {
    const unsigned depth = c.depth ? c.depth : 20;
    const std::size_t grid = c.grid ? c.grid : 21;
    const auto xs = uniform_grid(0.0, dual_top(lambda), grid);
    std::vector<IdentitySeries> rows(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { rows[i] = functional_identity_partial(lambda, xs[i], depth); });
    Output o;
    Csv csv({"x", "partial_sum", "tail", "pruned_mass"});
    double worst_drop = 0.0, top = 0.0, low = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& s = rows[i];
        csv.row(xs[i], s.value, s.tail, s.pruned_mass);
        for (std::size_t k = 1; k < s.partial_sums.size(); ++k)
            worst_drop = std::max(worst_drop, s.partial_sums[k - 1] - s.partial_sums[k]);
        top = std::max(top, s.value);
        low = std::min(low, s.value);
    }
    o.csv = csv.str();
    const bool outside = exceptional_set_check(lambda).in_d;
    o.result["outside_theorem_hypothesis"] = outside;
    o.result["min_partial_sum"] = low;
    o.verdicts.claim("partial_sums_monotone", worst_drop <= 0.0, worst_drop, 0.0,
                     "partial sums of a nonnegative series do not decrease");
    o.verdicts.claim("bounded_by_one", top <= 1.0 + 1e-9, top, 1e-9, "sum over W_0 never exceeds 1");
    if (!outside)
        o.verdicts.observe("reaches_0.999", low >= 0.999, low, 0.999,
                           "sum over W_0 of W^w |nu_hat(tau_w x)|^2 tends to 1");
    return o;
}

Output cmd_harmonic(const RunConfig& c, const ScalarParam& lambda) {
    const unsigned depth = c.depth ? c.depth : 18;
    const std::size_t grid = c.grid ? c.grid : 101;
    const WeightFn w = WeightFn::bernoulli(lambda);
    const bool in_d = exceptional_set_check(lambda).in_d;
    const auto xs = uniform_grid(0.0, dual_top(lambda), grid);
    std::vector<HarmonicPair> rows(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { rows[i] = harmonic_pair(PathMeasureQuery(xs[i], w, depth)); });
    Output o;
    Csv csv({"x", "h0", "h1", "h0_plus_h1"});
    double worst_drop = 0.0, top = 0.0, low = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double a = rows[i].h0.value;
        const double b = in_d ? rows[i].h1.value : 0.0;
        csv.row(xs[i], a, b, a + b);
        for (const auto* e : {&rows[i].h0, &rows[i].h1})
            for (std::size_t k = 1; k < e->partial_sums.size(); ++k)
                worst_drop = std::max(worst_drop, e->partial_sums[k - 1] - e->partial_sums[k]);
        top = std::max(top, a + b);
        low = std::min(low, a + b);
    }
    o.csv = csv.str();
    o.result["in_D"] = in_d;
    o.result["min_total"] = low;
    o.verdicts.claim("partial_sums_monotone", worst_drop <= 0.0, worst_drop, 0.0,
                     "atom sums increase with depth");
    o.verdicts.claim("total_mass_at_most_one", top <= 1.0 + 1e-9, top, 1e-9, "h0 + h1 <= 1");
    o.verdicts.claim("h0_at_zero_is_one", rows.front().h0.value == 1.0, rows.front().h0.value, 0.0,
                     "h0(0) = 1");
    if (in_d)
        o.verdicts.claim("h0_below_half_at_fixed_point", rows.back().h0.value < 0.5, rows.back().h0.value, 0.5,
                         "lambda in D: h0 vanishes at lambda/(4(1-lambda))");
    o.verdicts.observe("total_reaches_0.999", low >= 0.999, low, 0.999,
                       in_d ? "h0 + h1 = 1 for lambda in D" : "h0 = 1 for lambda outside D");
    return o;
}

Output cmd_wiener(const RunConfig& c, const ScalarParam& lambda) {
    const auto seq = wiener_cesaro(lambda, c.T, c.nmax);
    Output o;
    Csv csv({"n", "L", "s"});
    double worst_rise = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        csv.row(seq[i].n, seq[i].length, seq[i].s);
        if (i) worst_rise = std::max(worst_rise, seq[i].s - seq[i - 1].s);
    }
    o.csv = csv.str();
    o.result["final_s"] = seq.back().s;
    o.verdicts.claim("nonincreasing", worst_rise <= 1e-12, worst_rise, 1e-12,
                     "s(lambda^-n T) is nonincreasing in n");
    if (c.nmax >= 5) {
        const unsigned hi = std::min(c.nmax, 10u);
        const double slope = wiener_log2_slope(seq, 4, hi);
        o.result["log2_slope"] = slope;
        if (lambda.value() == 0.5)
            o.verdicts.claim("log2_slope_minus_one", std::fabs(slope + 1.0) <= 0.15, slope, 0.15,
                             "s decays like 2^-n");
    }
    return o;
}

Output cmd_measure(const RunConfig& c, const ScalarParam& lambda) {
    const AffineIFS ifs = make_system(c.system, lambda);
    std::vector<double> probs(ifs.size(), 1.0 / static_cast<double>(ifs.size()));
    ChaosGameOptions opt;
    opt.samples = c.samples ? c.samples : 1'000'000;
    opt.bins = c.grid ? c.grid : 64;
    opt.seed = c.seed;
    opt.stride = c.stride;
    if (c.depth) opt.coverage_depth = c.depth;
    MeasureReport rep = chaos_game(ifs, probs, opt);
    const double residual = self_similarity_residual(rep, ifs, probs);
    Output o;
    Csv csv({"bin", "lo", "hi", "mass"});
    const auto m = rep.masses();
    const double width = rep.hull.length() / static_cast<double>(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        csv.row(i, rep.hull.lo + width * static_cast<double>(i), rep.hull.lo + width * static_cast<double>(i + 1), m[i]);
    o.csv = csv.str();
    o.result["samples"] = rep.samples;
    o.result["stride"] = opt.stride ? opt.stride : decorrelation_stride(ifs.lambda());
    o.result["self_similarity_residual"] = residual;
    o.result["max_bin_mass"] = rep.max_bin_mass;
    o.result["support_coverage"] = rep.support_coverage;
    o.result["coverage_depth"] = rep.coverage_depth;
    if (rep.samples >= 100'000) {
        const AtomScan scan = atom_scan(rep);
        o.result["atom_scan"] = {{"levels", scan.levels}, {"max_mass", scan.max_mass}, {"ratios", scan.ratios}};
        o.verdicts.claim("no_atom_suspect", !scan.atom_suspect, scan.max_mass.back(), kAtomMassThreshold,
                         "the strongly invariant measure of an affine IFS has no atoms");
    }
    o.verdicts.observe("full_support", rep.support_coverage == 1.0, rep.support_coverage, 1.0,
                       "every symbolic cell of the coverage depth carries mass");
    o.verdicts.observe("self_similarity_residual_small", residual < 0.02, residual, 0.02,
                       "nu = sum_i p_i nu o tau_i^-1");
    if (ifs.is_exact()) {
        long long margin = LLONG_MAX;
        for (unsigned n = 1; n <= 12; ++n) {
            const auto cnt = static_cast<long long>(backward_orbit_count(ifs, Rational(0), n));
            margin = std::min(margin, cnt - static_cast<long long>(n));
        }
        o.verdicts.claim("backward_orbit_at_least_n", margin >= 0, static_cast<double>(margin), 0.0,
                         "min over n <= 12 of (#backward orbit of 0 at level n) - n is nonnegative");
    }
    return o;
}

Output cmd_paths(const RunConfig& c, const ScalarParam& lambda) {
    const WeightFn w = WeightFn::bernoulli(lambda);
    const double x = std::isnan(c.x) ? dual_top(lambda) / 3.0 : c.x;
    const unsigned length = c.depth ? c.depth : 10;
    const std::size_t count = c.samples ? c.samples : 1000;
    const PathMeasureQuery q(x, w, length, c.seed);
    const auto paths = sample_paths(q, length, count);
    Output o;
    Csv csv({"path", "word", "point", "probability"});
    std::size_t first_quarter = 0;
    for (std::size_t k = 0; k < paths.size(); ++k) {
        double p = 1.0;
        for (double v : paths[k].weights) p *= v;
        csv.row(k, word_string(w.ifs(), paths[k].letters), paths[k].point, p);
        first_quarter += paths[k].letters.front() == 1 ? 1 : 0;
    }
    o.csv = csv.str();
    const double expected = cylinder_prob(q, Word{1});
    const double freq = static_cast<double>(first_quarter) / static_cast<double>(count);
    const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(count));
    const AtomicityReport atoms = atomicity_report(PathMeasureQuery(x, w, std::min(length, 18u)));
    o.result["x"] = x;
    o.result["first_letter_quarter_frequency"] = freq;
    o.result["first_letter_quarter_probability"] = expected;
    o.result["mass_in_N0"] = atoms.mass_in_n0;
    o.result["mass_in_N1"] = atoms.mass_in_n1;
    o.result["residual"] = atoms.residual;
    o.verdicts.claim("first_cylinder_frequency", std::fabs(freq - expected) <= 3.0 * sigma + 1e-15,
                     std::fabs(freq - expected), 3.0 * sigma, "P_x(w_1 = 1/4) = W(tau_{1/4} x), within 3 sigma");
    return o;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ResourceError("cannot open '" + path + "' for writing");
    f << text;
}

int run(const RunConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    const ScalarParam lambda = ScalarParam::parse(c.lambda);
    Output o;
    if (c.command == "attractor") o = cmd_attractor(c, lambda);
    else if (c.command == "cycles") o = cmd_cycles(c, lambda);
    else if (c.command == "fourier") o = cmd_fourier(c, lambda);
    else if (c.command == "identity") o = cmd_identity(c, lambda);
    else if (c.command == "harmonic") o = cmd_harmonic(c, lambda);
    else if (c.command == "wiener") o = cmd_wiener(c, lambda);
    else if (c.command == "measure") o = cmd_measure(c, lambda);
    else if (c.command == "paths") o = cmd_paths(c, lambda);
    else throw UsageError("unknown subcommand");
    json summary;
    summary["schema"] = 1;
    summary["input"] = input_echo(c, lambda);
    summary["result"] = o.result;
    summary["claims"] = o.verdicts.claims;
    summary["observations"] = o.verdicts.observations;
    summary["all_claims_pass"] = o.verdicts.all_pass;
    summary["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string json_text = summary.dump(2) + "\n";
    if (c.format == "json") {
        write_text(c.out, json_text);
    } else {
        write_text(c.out, o.csv);
        if (!c.summary.empty()) write_text(c.summary, json_text);
    }
    return o.verdicts.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Harmonic analysis of affine IFSs and Bernoulli convolutions"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--lambda", cfg.lambda, "contraction ratio, a/b (exact) or a decimal");
        sub->add_option("--out", cfg.out, "output file for the primary output (default stdout)");
        sub->add_option("--summary", cfg.summary, "JSON summary file (csv format only)");
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", cfg.seed, "RNG seed");
    };

    auto* attractor = app.add_subcommand("attractor", "attractor hull, kind and depth-n cover");
    common(attractor);
    attractor->add_option("--system", cfg.system, "B, L or B01");
    attractor->add_option("--depth", cfg.depth, "cover depth (0: hull only)");

    auto* cycles = app.add_subcommand("cycles", "cycles of the dual system and W-cycle certificates");
    common(cycles);
    cycles->add_option("--max-period", cfg.max_period, "largest period enumerated");
    cycles->add_option("--tol", cfg.tol, "tolerance on |W - 1| for numerical certificates");

    auto* fourier = app.add_subcommand("fourier", "nu_hat on a uniform t grid");
    common(fourier);
    fourier->add_option("--tmin", cfg.tmin);
    fourier->add_option("--tmax", cfg.tmax);
    fourier->add_option("--samples", cfg.samples, "number of t values");

    auto* identity = app.add_subcommand("identity", "partial sums of the W_0 identity");
    common(identity);
    identity->add_option("--depth", cfg.depth);
    identity->add_option("--grid", cfg.grid, "points on [0, lambda/(4(1-lambda))]");

    auto* harmonic = app.add_subcommand("harmonic", "harmonic functions h0 and h1");
    common(harmonic);
    harmonic->add_option("--depth", cfg.depth);
    harmonic->add_option("--grid", cfg.grid, "points on [0, lambda/(4(1-lambda))]");

    auto* wiener = app.add_subcommand("wiener", "Cesaro means of |nu_hat|^2");
    common(wiener);
    wiener->add_option("--T", cfg.T, "initial half-length");
    wiener->add_option("--nmax", cfg.nmax);

    auto* measure = app.add_subcommand("measure", "chaos-game histogram of the invariant measure");
    common(measure);
    measure->add_option("--system", cfg.system, "B, L or B01");
    measure->add_option("--samples", cfg.samples);
    measure->add_option("--grid", cfg.grid, "histogram bins");
    measure->add_option("--depth", cfg.depth, "symbolic coverage depth");
    measure->add_option("--stride", cfg.stride, "chain steps per recorded sample (0: decorrelating default, 1: raw chain)");

    auto* paths = app.add_subcommand("paths", "paths sampled from P_x");
    common(paths);
    paths->add_option("--x", cfg.x, "base point (default a third of the hull)");
    paths->add_option("--depth", cfg.depth, "path length");
    paths->add_option("--samples", cfg.samples, "number of paths");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    try {
        return run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
