#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "errors.hpp"

namespace bifs {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw UsageError("rational with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "a/b" or an integer literal. Anything else is rejected.
inline Rational parse_rational(std::string_view text) {
    auto digits_only = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den))
        throw UsageError("not a rational literal: '" + std::string(text) + "'");
    BigInt n(std::string(num.front() == '+' ? num.substr(1) : num));
    BigInt d(std::string(den.front() == '+' ? den.substr(1) : den));
    if (d == 0) throw UsageError("rational with zero denominator: '" + std::string(text) + "'");
    return Rational(n, d);
}

}  // namespace bifs
