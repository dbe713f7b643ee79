#include "catch_amalgamated.hpp"

#include <bifs/ifs.hpp>
#include <bifs/random.hpp>

#include <algorithm>
#include <cmath>
#include <set>

using namespace bifs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ScalarParam q(long long a, long long b) { return ScalarParam::from_rational(a, b); }

// Forward-order finite sum sum_j lambda^j b_j, independent of the Horner form in the library.
double direct_sum(double lambda, const std::vector<double>& digits) {
    double s = 0.0, p = lambda;
    for (double d : digits) {
        s += p * d;
        p *= lambda;
    }
    return s;
}

}  // namespace

TEST_CASE("scalar parameter parsing and validation") {
    const auto exact = ScalarParam::parse("6/8");
    REQUIRE(exact.is_exact());
    CHECK(exact.rational() == make_rational(3, 4));
    CHECK(exact.value() == 0.75);
    CHECK_FALSE(ScalarParam::parse("0.75").is_exact());
    CHECK_THROWS_AS(ScalarParam::parse("3/2"), DomainError);
    CHECK_THROWS_AS(ScalarParam::parse("0"), DomainError);
    CHECK_THROWS_AS(ScalarParam::parse("1"), DomainError);
    CHECK_THROWS_AS(ScalarParam::parse("abc"), UsageError);
    CHECK_THROWS_AS(ScalarParam::parse("1/x"), UsageError);
}

TEST_CASE("tau and its inverse") {
    const auto L = AffineIFS::dual(q(1, 2));
    CHECK(tau_apply(L, 0, 1.0) == 0.5);
    CHECK(tau_apply(L, 1, 0.0) == 0.125);
    CHECK(tau_inverse(L, 0, 0.5) == 1.0);
    CHECK(tau_inverse(L, 1, 0.125) == 0.0);

    const auto B = AffineIFS::bernoulli(q(1, 2));
    CHECK(tau_apply(B, 1, 0.0) == 1.0);   // tau_+(x) = lambda x + 1
    CHECK(tau_apply(B, 0, 0.0) == -1.0);  // tau_-(x) = lambda x - 1
    CHECK(tau_inverse(B, 1, 1.0) == 0.0);

    CHECK_THROWS_AS(tau_apply(L, 2, 0.0), UsageError);
    CHECK_THROWS_AS(AffineIFS::with_digits(q(1, 2), {1.0, 1.0}), UsageError);
}

TEST_CASE("tau round trip on random points") {
    CounterRng rng(7, 0);
    for (auto lam : {q(1, 3), q(2, 3), q(5, 6)}) {
        const auto B = AffineIFS::bernoulli(lam);
        for (int k = 0; k < 1000; ++k) {
            const double x = 8.0 * rng.uniform() - 4.0;
            for (std::size_t i = 0; i < 2; ++i) CHECK_THAT(tau_inverse(B, i, tau_apply(B, i, x)), WithinAbs(x, 1e-12));
        }
        const Rational x = make_rational(7, 11);
        for (std::size_t i = 0; i < 2; ++i) CHECK(tau_inverse_exact(B, i, tau_apply_exact(B, i, x)) == x);
    }
}

TEST_CASE("finite encodings") {
    const auto B01 = AffineIFS::binary(q(1, 2));
    CHECK(encode_finite(B01, {1, 0, 1}) == 0.625);
    CHECK(encode_finite_exact(B01, {1, 0, 1}) == make_rational(5, 8));
    CHECK(encode_finite(B01, {}) == 0.0);
    CHECK(encode_finite(AffineIFS::dual(q(1, 2)), {1}) == 0.125);

    CounterRng rng(11, 0);
    for (auto lam : {q(1, 3), q(3, 5), q(4, 5)}) {
        const auto L = AffineIFS::dual(lam);
        for (int k = 0; k < 200; ++k) {
            Word w(1 + rng.next_u64() % 12);
            std::vector<double> d;
            for (auto& letter : w) {
                letter = static_cast<unsigned>(rng.next_u64() & 1);
                d.push_back(letter * 0.25);
            }
            CHECK_THAT(encode_finite(L, w), WithinAbs(direct_sum(lam.value(), d), 1e-15));
            CHECK(encode_finite_exact(L, w) == [&] {
                Rational s = 0, p = lam.rational();
                for (unsigned letter : w) {
                    s += p * L.exact_digit(letter);
                    p *= lam.rational();
                }
                return s;
            }());
            // Zero padding is invisible.
            Word padded = w;
            padded.resize(w.size() + 5, 0);
            CHECK(encode_finite_exact(L, padded) == encode_finite_exact(L, w));
        }
    }
}

TEST_CASE("periodic encodings") {
    CHECK(encode_periodic(AffineIFS::dual(q(3, 4)), {1}) == 0.75);
    CHECK(encode_periodic_exact(AffineIFS::dual(q(3, 4)), {1}) == make_rational(3, 4));
    CHECK(encode_periodic(AffineIFS::dual(q(1, 2)), {1}) == 0.25);
    CHECK(encode_periodic(AffineIFS::dual(q(2, 3)), {0}) == 0.0);

    // Limit of repeated words, within lambda^{n|w|} diam(X).
    for (auto lam : {q(1, 3), q(2, 3), q(5, 6)}) {
        const auto L = AffineIFS::dual(lam);
        const double diam = L.hull().length();
        for (const Word& w : {Word{1}, Word{0, 1}, Word{1, 1, 0}, Word{0, 1, 0, 1, 1}}) {
            const double target = encode_periodic(L, w);
            for (unsigned n : {1u, 3u, 6u}) {
                Word rep;
                for (unsigned k = 0; k < n; ++k) rep.insert(rep.end(), w.begin(), w.end());
                const double bound = std::pow(lam.value(), double(n * w.size())) * diam;
                CHECK(std::fabs(encode_finite(L, rep) - target) <= bound + 1e-15);
            }
            // Fixed point of tau_w.
            Rational y = encode_periodic_exact(L, w);
            Rational z = y;
            for (auto it = w.rbegin(); it != w.rend(); ++it) z = tau_apply_exact(L, *it, z);
            CHECK(z == y);
        }
    }
}

TEST_CASE("attractor classification") {
    const auto a = attractor_describe(AffineIFS::dual(q(3, 4)));
    CHECK(a.kind == AttractorKind::interval);
    CHECK(a.hull.lo == 0.0);
    CHECK(a.hull.hi == 0.75);

    const auto b = attractor_describe(AffineIFS::bernoulli(q(1, 2)));
    CHECK(b.kind == AttractorKind::interval);
    CHECK(b.hull.lo == -2.0);
    CHECK(b.hull.hi == 2.0);

    const auto c = attractor_describe(AffineIFS::binary(q(1, 3)));
    CHECK(c.kind == AttractorKind::cantor);
    REQUIRE(c.hausdorff_dim);
    CHECK_THAT(*c.hausdorff_dim, WithinAbs(0.63093, 1e-5));
    CHECK_THAT(*c.hausdorff_dim, WithinRel(std::log(2.0) / std::log(3.0), 1e-15));
    CHECK(c.hull.hi == 0.5);

    CHECK(attractor_describe(AffineIFS::binary(q(1, 2))).kind == AttractorKind::interval);
    CHECK_THROWS_AS(attractor_describe(AffineIFS::with_digits(q(1, 3), {0.0, 1.0, 2.0})), UnsupportedConfiguration);
}

TEST_CASE("depth-n cover contains the depth-n encodings") {
    for (auto lam : {q(1, 3), q(1, 2), q(3, 4)}) {
        const auto ifs = AffineIFS::binary(lam);
        const unsigned depth = 6;
        const auto cells = attractor_cover(ifs, depth);
        REQUIRE(cells.size() == 64);
        const Interval h = ifs.hull();
        for (std::size_t code = 0; code < cells.size(); ++code) {
            Word w(depth);
            for (unsigned k = 0; k < depth; ++k) w[k] = (code >> (depth - 1 - k)) & 1;
            const double x = encode_finite(ifs, w);
            CHECK(cells[code].contains(x, 1e-14));
            CHECK(cells[code].lo >= h.lo - 1e-14);
            CHECK(cells[code].hi <= h.hi + 1e-14);
            CHECK_THAT(cells[code].length(), WithinRel(std::pow(lam.value(), depth) * h.length(), 1e-12));
        }
    }
    CHECK_THROWS_AS(attractor_cover(AffineIFS::binary(q(1, 3)), 25), ResourceError);
}

TEST_CASE("Cantor gap sum equals the hull length") {
    CHECK(cantor_gap_sum_exact(make_rational(1, 3)) == make_rational(1, 2));
    CHECK(cantor_gap_sum_exact(make_rational(1, 4)) == make_rational(1, 3));
    CHECK_THAT(cantor_gap_sum(q(1, 3)), WithinAbs(0.5, 1e-15));
    for (int b = 3; b <= 20; ++b) {
        const Rational lam = make_rational(1, b);
        CHECK(cantor_gap_sum_exact(lam) == lam / (1 - lam));
        const auto l = ScalarParam::from_double(0.49 * (1.0 - 1.0 / b));
        CHECK_THAT(cantor_gap_sum(l), WithinRel(l.value() / (1.0 - l.value()), 1e-12));
    }
    CHECK_THROWS_AS(cantor_gap_sum(q(1, 2)), DomainError);
    CHECK_THROWS_AS(cantor_gap_sum(q(2, 3)), DomainError);
}

TEST_CASE("lambda-representation digits") {
    CHECK(lambda_representation(q(1, 3), 1.0 / 3.0, 3) == std::vector<unsigned>{1, 0, 0});
    CHECK(lambda_representation_exact(make_rational(1, 3), make_rational(1, 3), 3) == std::vector<unsigned>{1, 0, 0});
    CHECK(lambda_representation(q(1, 3), 0.0, 5) == std::vector<unsigned>(5, 0));
    CHECK(representation_alphabet_max(q(2, 3)) == 2);
    CHECK(representation_alphabet_max(q(1, 2)) == 1);   // 1/(1-lambda) = 2 is excluded
    CHECK(representation_alphabet_max(q(3, 4)) == 3);
    CHECK(representation_alphabet_max(ScalarParam::from_double(0.7)) == 3);
    CHECK_THROWS_AS(lambda_representation(q(1, 3), 0.6, 3), DomainError);
    CHECK_THROWS_AS(lambda_representation(q(1, 3), -0.1, 3), DomainError);

    // Below 1/2 X_B is the Cantor set and the expansion is unique: the exact
    // digits of a random 0/1 expansion reproduce the word. Float digits are not
    // checked there because a rounded-down integer quotient leaves r near lambda
    // and the next digit overshoots.
    CounterRng rng(3, 0);
    for (auto [a, b] : {std::pair{1, 3}, {2, 5}, {3, 7}}) {
        const auto B01 = AffineIFS::binary(q(a, b));
        for (int t = 0; t < 200; ++t) {
            Word w(24);
            for (auto& letter : w) letter = static_cast<unsigned>(rng.next_u64() & 1);
            const auto d = lambda_representation_exact(make_rational(a, b), encode_finite_exact(B01, w), 24);
            CHECK(d == std::vector<unsigned>(w.begin(), w.end()));
        }
    }
    // At or above 1/2 X_B is the hull: 0 <= x - sum_{j <= k} w_j lambda^j <= a lambda^k / (1 - lambda).
    for (auto lam : {q(1, 2), q(3, 5), q(2, 3), q(4, 5), ScalarParam::from_double(0.7)}) {
        const double l = lam.value();
        const double a = representation_alphabet_max(lam);
        for (int t = 0; t < 500; ++t) {
            const double x = rng.uniform() * l / (1.0 - l);
            for (unsigned k : {1u, 5u, 20u}) {
                const auto d = lambda_representation(lam, x, k);
                double s = 0.0, p = l;
                for (unsigned dj : d) {
                    CHECK(dj <= a);
                    s += dj * p;
                    p *= l;
                }
                const double bound = a * std::pow(l, k) / (1.0 - l);
                CHECK(x - s >= -1e-13);
                CHECK(x - s <= bound + 1e-13);
            }
        }
    }
    // Off the Cantor set the fractional-part map needs digits up to floor(1/lambda).
    const auto off = lambda_representation(q(1, 3), 0.49, 8);
    CHECK(*std::max_element(off.begin(), off.end()) == 2);
}

TEST_CASE("exact lambda-representation matches float on dyadic points") {
    const Rational lam = make_rational(2, 3);
    for (int n = 0; n <= 16; ++n) {
        const Rational x = make_rational(n, 8);
        CHECK(lambda_representation_exact(lam, x, 12) == lambda_representation(q(2, 3), to_double(x), 12));
    }
}

TEST_CASE("affine normalization") {
    const auto alpha = affine_normalize(q(1, 2), 2.0, 5.0);
    CHECK(alpha.slope == 3.0);
    CHECK(alpha.intercept == 2.0);
    // pi_{0,1}(1,0,0,...) = 1/2, pi_{2,5}(5,2,2,...) = 5/2 + 2 sum_{j>=2} 2^-j.
    CHECK(alpha(0.5) == 3.5);
    CHECK_THAT(direct_sum(0.5, std::vector<double>(60, 2.0)) + 3.0 * 0.5, WithinAbs(3.5, 1e-15));

    const auto id = affine_normalize(q(1, 2), 0.0, 1.0);
    CHECK(id.slope == 1.0);
    CHECK(id.intercept == 0.0);

    const auto b = affine_normalize(q(1, 2), -2.0, 2.0);
    CHECK(b.slope == 4.0);
    CHECK(b.intercept == -2.0);

    CHECK_THROWS_AS(affine_normalize(q(1, 2), 1.0, 1.0), UsageError);

    // alpha carries {0,1}-expansions to {a,b}-expansions letter by letter.
    CounterRng rng(5, 0);
    for (auto lam : {q(1, 3), q(2, 3)}) {
        const auto m = affine_normalize(lam, -1.5, 0.25);
        for (int t = 0; t < 100; ++t) {
            std::vector<double> zero_one(80), ab(80);
            for (int j = 0; j < 80; ++j) {
                const bool bit = rng.next_u64() & 1;
                zero_one[j] = bit ? 1.0 : 0.0;
                ab[j] = bit ? 0.25 : -1.5;
            }
            CHECK_THAT(m(direct_sum(lam.value(), zero_one)), WithinAbs(direct_sum(lam.value(), ab), 1e-12));
        }
    }
}

TEST_CASE("encodings are injective below one half") {
    CHECK(distinct_encodings_exact(AffineIFS::binary(q(1, 3)), 10) == 1024);
    CHECK(distinct_encodings_exact(AffineIFS::binary(q(2, 5)), 8) == 256);
    // For rational a/b, b^n sum_j c_j lambda^j = 0 with c_j in {-1,0,1} forces c_n = 0 mod b,
    // so equal-length words never collide even in the overlapping regime.
    CHECK(distinct_encodings_exact(AffineIFS::binary(q(1, 2)), 8) == 256);
    CHECK(distinct_encodings_exact(AffineIFS::binary(q(2, 3)), 8) == 256);
}

TEST_CASE("fiber multiplicity witnesses") {
    // Injective regime: each attractor point has a single prefix of every length.
    const auto c = AffineIFS::binary(q(1, 3));
    const double x = encode_finite(c, {1, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 1, 0, 1, 0, 1, 0, 1});
    for (unsigned n = 1; n <= 12; ++n) CHECK(fiber_multiplicity(c, x, n) == 1);

    // Overlapping regime: the count grows with n at an interior point.
    const auto o = AffineIFS::binary(q(2, 3));
    const double mid = 0.5 * o.hull().hi;
    std::size_t prev = 0;
    for (unsigned n = 1; n <= 14; ++n) {
        const std::size_t m = fiber_multiplicity(o, mid, n);
        CHECK(m >= prev);
        prev = m;
    }
    CHECK(prev > 14);
    CHECK_THROWS_AS(fiber_multiplicity(o, mid, 31), ResourceError);
}
