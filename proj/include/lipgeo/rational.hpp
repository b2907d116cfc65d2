#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lipgeo {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown for malformed textual input (exponents, coefficients, JSON fields).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

/// p/q with the sign moved to the numerator (cpp_rational rejects q < 0).
inline Rational make_rational(Integer p, Integer q) {
    if (q == 0) throw std::domain_error("zero denominator");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    return Rational(p, q);
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline std::string to_string(const Rational& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Accepts "p", "p/q", "-p/q" and plain decimals like "1.5".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto fail = [&]() -> Rational { throw ParseError("not a rational number: '" + s + "'"); };
    if (s.empty()) return fail();
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Integer p(s.substr(0, slash));
            Integer q(s.substr(slash + 1));
            if (q == 0) return fail();
            return make_rational(p, q);
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            if (digits == "-" || digits.empty()) return fail();
            Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(s.size() - dot - 1));
            return Rational(Integer(digits), scale);
        }
        return Rational(Integer(s));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        return fail();
    }
}

/// The exact dyadic rational equal to a finite double.
inline Rational exact_rational(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("exact_rational: non-finite value");
    if (x == 0.0) return 0;
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e, 0.5 <= |m| < 1
    auto mant = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    Rational r(mant);
    if (e > 0) r *= Rational(Integer(1) << e);
    else if (e < 0) r /= Rational(Integer(1) << -e);
    return r;
}

inline Integer floor(const Rational& r) {
    Integer q = numerator(r) / denominator(r);
    if (q * denominator(r) > numerator(r)) q -= 1;
    return q;
}

inline Integer ceil(const Rational& r) {
    Integer f = floor(r);
    return f == r ? f : f + 1;
}

inline Rational pow(const Rational& base, unsigned exp) {
    Rational out = 1;
    Rational b = base;
    while (exp) {
        if (exp & 1u) out *= b;
        b *= b;
        exp >>= 1u;
    }
    return out;
}

/// Exact integer k-th root if it exists.
inline std::optional<Integer> exact_root(const Integer& n, unsigned k) {
    if (n < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = exact_root(-n, k);
        if (!r) return std::nullopt;
        return Integer(-*r);
    }
    if (n < 2 || k == 1) return n;
    // Newton iteration on integers, starting above the root.
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
    Integer x = Integer(1) << ((bits + k - 1) / k + 1);
    while (true) {
        Integer xk1 = boost::multiprecision::pow(x, k - 1);
        Integer y = ((k - 1) * x + n / xk1) / k;
        if (y >= x) break;
        x = y;
    }
    for (Integer c = x > 0 ? x - 1 : x; c <= x + 1; ++c) {
        if (c >= 0 && boost::multiprecision::pow(c, k) == n) return c;
    }
    return std::nullopt;
}

/// base^(p/q) when the result is rational; nullopt otherwise.
inline std::optional<Rational> rational_power(const Rational& base, const Rational& e) {
    if (base == 0) {
        if (e > 0) return Rational(0);
        if (e == 0) return Rational(1);
        return std::nullopt;
    }
    Integer p = numerator(e);
    Integer q = denominator(e);
    if (q > 64 || boost::multiprecision::abs(p) > 4096) return std::nullopt;
    unsigned qq = q.convert_to<unsigned>();
    auto rn = exact_root(numerator(base), qq);
    auto rd = exact_root(denominator(base), qq);
    if (!rn || !rd) return std::nullopt;
    Rational root(*rn, *rd);
    bool neg = p < 0;
    unsigned pp = static_cast<unsigned>(boost::multiprecision::abs(p).convert_to<unsigned long>());
    Rational out = pow(root, pp);
    return neg ? Rational(1) / out : out;
}

}  // namespace lipgeo
