#pragma once

#include "lipgeo/rational.hpp"

#include <compare>
#include <limits>
#include <stdexcept>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace lipgeo {

/// A rational number or +infinity. Home of Hölder exponents, orders and
/// tangency orders. Infinity compares above every finite value.
class Exponent {
public:
    Exponent() = default;
    Exponent(const Rational& v) : value_(v) {}  // NOLINT(implicit)
    Exponent(long long v) : value_(v) {}         // NOLINT(implicit)
    Exponent(long long p, long long q) : value_(make_rational(p, q)) {}

    static Exponent infinity() {
        Exponent e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    /// Finite value; calling on infinity is a logic error.
    const Rational& value() const {
        if (infinite_) throw std::logic_error("Exponent::value() on infinity");
        return value_;
    }

    double to_double() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : lipgeo::to_double(value_);
    }

    friend bool operator==(const Exponent& a, const Exponent& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
        if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
        if (a.infinite_) return std::strong_ordering::greater;
        if (b.infinite_) return std::strong_ordering::less;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // inf + x = inf; finite sums stay exact.
    friend Exponent operator+(const Exponent& a, const Exponent& b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return Exponent(a.value_ + b.value_);
    }

    std::string str() const { return infinite_ ? "inf" : to_string(value_); }

    static Exponent parse(std::string_view text) {
        if (text == "inf" || text == "infinity" || text == "∞") return infinity();
        return Exponent(parse_rational(text));
    }

    friend std::ostream& operator<<(std::ostream& os, const Exponent& e) { return os << e.str(); }

private:
    Rational value_{0};
    bool infinite_ = false;
};

struct ExponentComparison {
    Exponent min;
    Exponent max;
    std::strong_ordering ordering;
};

inline ExponentComparison ext_min_max_cmp(const Exponent& a, const Exponent& b) {
    auto ord = a <=> b;
    if (ord == std::strong_ordering::greater) return {b, a, ord};
    return {a, b, ord};
}

inline const Exponent& min(const Exponent& a, const Exponent& b) { return b < a ? b : a; }
inline const Exponent& max(const Exponent& a, const Exponent& b) { return a < b ? b : a; }

}  // namespace lipgeo
