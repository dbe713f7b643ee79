#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "rational.hpp"

namespace bifs {

/// Tolerance used for equality tests whenever an exact value is not available.
inline constexpr double kFloatEqualityTol = 1e-12;

/// The contraction parameter lambda in (0, 1), carried exactly when it is rational.
class ScalarParam {
public:
    static ScalarParam from_double(double value) {
        if (!(value > 0.0 && value < 1.0))
            throw DomainError("lambda must lie in (0, 1), got " + std::to_string(value));
        ScalarParam p;
        p.value_ = value;
        return p;
    }

    /// Reduces to lowest terms.
    static ScalarParam from_rational(const Rational& q) {
        if (!(q > 0 && q < 1)) throw DomainError("lambda must lie in (0, 1), got " + bifs::to_string(q));
        ScalarParam p;
        p.value_ = to_double(q);
        p.exact_ = q;
        return p;
    }

    static ScalarParam from_rational(long long num, long long den) {
        return from_rational(make_rational(num, den));
    }

    /// "a/b" parses exactly; any other literal is read as a double.
    static ScalarParam parse(std::string_view text) {
        if (text.find('/') != std::string_view::npos) return from_rational(parse_rational(text));
        std::string s(text);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw UsageError("cannot parse lambda '" + s + "'");
        }
        if (used != s.size()) throw UsageError("cannot parse lambda '" + s + "'");
        return from_double(v);
    }

    double value() const { return value_; }
    bool is_exact() const { return exact_.has_value(); }
    const std::optional<Rational>& exact() const { return exact_; }

    /// Requires an exact parameter.
    const Rational& rational() const {
        if (!exact_) throw UsageError("operation requires an exact rational lambda");
        return *exact_;
    }

    std::string to_string() const {
        if (exact_) return bifs::to_string(*exact_);
        std::ostringstream os;
        os.precision(17);
        os << value_;
        return os.str();
    }

private:
    ScalarParam() = default;
    double value_ = 0.5;
    std::optional<Rational> exact_;
};

}  // namespace bifs
