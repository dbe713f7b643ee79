#include "catch_amalgamated.hpp"

#include <bifs/cycles.hpp>

#include <set>

using namespace bifs;
using Catch::Matchers::WithinAbs;

namespace {

ScalarParam q(long long a, long long b) { return ScalarParam::from_rational(a, b); }

const std::vector<std::pair<int, int>> kRationals{{1, 3}, {1, 2}, {3, 5}, {2, 3}, {3, 4}, {4, 5}, {5, 6}};

Word word_of(unsigned code, unsigned len) {
    Word w(len);
    for (unsigned k = 0; k < len; ++k) w[k] = (code >> (len - 1 - k)) & 1;
    return w;
}

// Brute force: least rotations of all binary words with minimal period p.
std::set<Word> brute_necklaces(unsigned p) {
    std::set<Word> out;
    for (unsigned code = 0; code < (1u << p); ++code) {
        const Word w = word_of(code, p);
        bool primitive = true;
        for (unsigned d = 1; d < p && primitive; ++d)
            if (p % d == 0 && rotate_left(w, d) == w) primitive = false;
        if (!primitive) continue;
        Word best = w;
        for (unsigned r = 1; r < p; ++r) best = std::min(best, rotate_left(w, r));
        out.insert(best);
    }
    return out;
}

}  // namespace

TEST_CASE("cycle enumeration counts") {
    const auto L = AffineIFS::dual(q(2, 3));
    CHECK(enumerate_cycles(L, 1).size() == 2);
    CHECK(enumerate_cycles(L, 2).size() == 3);
    CHECK(enumerate_cycles(L, 3).size() == 5);
    CHECK_THROWS_AS(enumerate_cycles(L, 0), UsageError);
    CHECK_THROWS_AS(enumerate_cycles(L, 13), ResourceError);
    CHECK_NOTHROW(enumerate_cycles(L, 13, 13));
}

TEST_CASE("necklace completeness") {
    for (unsigned p = 1; p <= 8; ++p) {
        const auto brute = brute_necklaces(p);
        CHECK(necklace_count(2, p) == brute.size());
        std::set<Word> lyndon;
        for (const auto& w : lyndon_words(2, p))
            if (w.size() == p) lyndon.insert(w);
        CHECK(lyndon == brute);
    }
    CHECK(necklace_count(3, 4) == 18);  // (81 - 9) / 4
}

TEST_CASE("enumeration order and stored generators") {
    const auto cycles = enumerate_cycles(AffineIFS::dual(q(3, 5)), 6);
    for (std::size_t i = 0; i + 1 < cycles.size(); ++i) {
        const auto& a = cycles[i].word;
        const auto& b = cycles[i + 1].word;
        CHECK((a.size() < b.size() || (a.size() == b.size() && a < b)));
    }
    for (const auto& c : cycles) {
        CHECK(c.word == least_rotation(c.word));
        CHECK(c.minimal_period == c.word.size());
        CHECK(minimal_period(c.word) == c.word.size());
    }
    CHECK(minimal_period({0, 1, 0, 1}) == 2);
    CHECK(minimal_period({1, 1, 1}) == 1);
}

TEST_CASE("orbits close") {
    for (auto [a, b] : kRationals) {
        const auto L = AffineIFS::dual(q(a, b));
        for (const auto& c : enumerate_cycles(L, 8)) {
            CHECK(orbit_closes_exact(L, c));
            CHECK(orbit_closure_error(L, c) <= 1e-10);
            REQUIRE(c.exact_points);
            // Orbit points are pairwise distinct, so the period is minimal.
            std::set<Rational> distinct(c.exact_points->begin(), c.exact_points->end());
            CHECK(distinct.size() == c.minimal_period);
        }
    }
    const auto Lf = AffineIFS::dual(ScalarParam::from_double(0.9));
    for (const auto& c : enumerate_cycles(Lf, 6)) CHECK(orbit_closure_error(Lf, c) <= 1e-10);
}

TEST_CASE("W-cycle certificates") {
    const auto w34 = WeightFn::bernoulli(q(3, 4));
    const auto c34 = make_cycle(w34.ifs(), {1});
    CHECK(c34.points.front() == 0.75);
    const auto cert = certify_w_cycle(c34, w34);
    CHECK(cert.is_w_cycle);
    CHECK(cert.mode == CertificateMode::exact);

    const auto w23 = WeightFn::bernoulli(q(2, 3));
    const auto c23 = make_cycle(w23.ifs(), {1});
    CHECK_THAT(c23.points.front(), WithinAbs(0.5, 1e-15));
    const auto not_w = certify_w_cycle(c23, w23);
    CHECK_FALSE(not_w.is_w_cycle);
    CHECK(not_w.weights.front() <= 1e-20);

    for (auto [a, b] : kRationals) {
        const auto w = WeightFn::bernoulli(q(a, b));
        CHECK(certify_w_cycle(make_cycle(w.ifs(), {0}), w).is_w_cycle);
    }
    const auto wf = WeightFn::bernoulli(ScalarParam::from_double(0.75));
    const auto numeric = certify_w_cycle(make_cycle(wf.ifs(), {1}), wf);
    CHECK(numeric.mode == CertificateMode::numerical);
    CHECK(numeric.is_w_cycle);
}

TEST_CASE("exact divisibility records") {
    const auto r = exact_wcycle_divisibility(make_rational(2, 3), {0, 1});
    CHECK_FALSE(r.divisible);
    CHECK(r.value == make_rational(3, 5));
    CHECK(r.numerator == 6);
    CHECK(r.denominator == 10);
    CHECK(r.gcd == 2);

    const auto h = exact_wcycle_divisibility(make_rational(1, 2), {1});
    CHECK(h.divisible);
    CHECK(h.value == 1);

    for (auto [a, b] : kRationals) {
        const auto z = exact_wcycle_divisibility(make_rational(a, b), {0});
        CHECK(z.divisible);
        CHECK(z.numerator == 0);
    }

    const auto n = exact_wcycle_divisibility(BigInt(4), BigInt(6), {0, 1});
    CHECK(n.input_normalized);
    CHECK_FALSE(n.note.empty());
    CHECK(n.value == make_rational(3, 5));

    CHECK_THROWS_AS(exact_wcycle_divisibility(make_rational(2, 3), {2}), UsageError);
    CHECK_THROWS_AS(exact_wcycle_divisibility(BigInt(3), BigInt(2), {1}), DomainError);
    CHECK_THROWS_AS(exact_wcycle_divisibility(make_rational(2, 3), {}), UsageError);
}

TEST_CASE("divisibility value is 2x/lambda at the periodic point") {
    for (auto [a, b] : kRationals) {
        const Rational lam = make_rational(a, b);
        const auto L = AffineIFS::dual(q(a, b));
        for (unsigned p = 1; p <= 6; ++p)
            for (unsigned code = 0; code < (1u << p); ++code) {
                const Word w = word_of(code, p);
                const Rational x = encode_periodic_exact(L, w);
                const auto rec = exact_wcycle_divisibility(lam, w);
                CHECK(rec.value == 2 * x / lam);
                CHECK(rec.divisible == is_integer(2 * x / lam));
            }
    }
}

TEST_CASE("exact and float W tests agree on every word up to length 8") {
    for (auto [a, b] : kRationals) {
        const Rational lam = make_rational(a, b);
        const auto w = WeightFn::bernoulli(q(a, b));
        for (unsigned p = 1; p <= 8; ++p)
            for (unsigned code = 0; code < (1u << p); ++code) {
                const Word word = word_of(code, p);
                const bool exact = exact_wcycle_divisibility(lam, word).divisible;
                const bool numeric = std::fabs(w(encode_periodic(w.ifs(), word)) - 1.0) <= kWCycleTol;
                CHECK(exact == numeric);
            }
    }
}

TEST_CASE("exceptional set membership") {
    for (auto [a, b, n] : {std::tuple{1, 2, 1}, {3, 4, 2}, {5, 6, 3}, {7, 8, 4}, {19, 20, 10}}) {
        const auto r = exceptional_set_check(q(a, b));
        CHECK(r.in_d);
        CHECK(r.exact);
        REQUIRE(r.n);
        CHECK(*r.n == static_cast<unsigned>(n));
    }
    for (auto [a, b] : {std::pair{1, 3}, {2, 3}, {3, 5}, {4, 5}, {6, 7}, {5, 8}, {2, 5}})
        CHECK_FALSE(exceptional_set_check(q(a, b)).in_d);
    // Non-reduced input is reduced first: 6/8 = 3/4.
    CHECK(exceptional_set_check(ScalarParam::parse("6/8")).in_d);

    const auto f = exceptional_set_check(ScalarParam::from_double(0.875));
    CHECK(f.in_d);
    CHECK_FALSE(f.exact);
    CHECK(*f.n == 4);
    CHECK_FALSE(exceptional_set_check(ScalarParam::from_double(0.7)).in_d);
    CHECK_FALSE(exceptional_set_check(ScalarParam::from_double(0.75 + 1e-6)).in_d);
}

TEST_CASE("D membership is exactly a second W-1-cycle") {
    for (int b = 2; b <= 12; ++b)
        for (int a = 1; a < b; ++a) {
            const auto lam = q(a, b);
            const auto w = WeightFn::bernoulli(lam);
            const bool fixed_point_is_w = certify_w_cycle(make_cycle(w.ifs(), {1}), w).is_w_cycle;
            CHECK(fixed_point_is_w == exceptional_set_check(lam).in_d);
        }
}

TEST_CASE("no W-cycles of period above one") {
    for (auto [a, b] : kRationals) {
        const auto w = WeightFn::bernoulli(q(a, b));
        const auto rep = verify_no_long_wcycles(w, 8);
        CHECK(rep.mode == CertificateMode::exact);
        CHECK(rep.violations.empty());
        CHECK(rep.float_agrees);
        CHECK(rep.holds());
        std::size_t expected = 0;
        for (unsigned p = 2; p <= 8; ++p) expected += necklace_count(2, p);
        CHECK(rep.cycles_checked == expected);
        CHECK(rep.w_one_cycles.size() == (exceptional_set_check(q(a, b)).in_d ? 2u : 1u));
    }
    const auto golden = verify_no_long_wcycles(WeightFn::bernoulli(ScalarParam::from_double(0.6180339887498949)), 6);
    CHECK(golden.mode == CertificateMode::numerical);
    CHECK(golden.violations.empty());

    const auto one = verify_no_long_wcycles(WeightFn::bernoulli(q(1, 2)), 1);
    CHECK(one.w_one_cycles.size() == 2);
    CHECK(one.cycles_checked == 0);
    REQUIRE(one.w_one_cycles.size() == 2);
    CHECK(one.w_one_cycles[0].cycle.points.front() == 0.0);
    CHECK(one.w_one_cycles[1].cycle.points.front() == 0.25);
}
