#pragma once

#include "lipgeo/exponent.hpp"
#include "lipgeo/rational.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lipgeo {

/// Raised when an answer depends on terms beyond the series resolution bound.
class InconclusiveError : public std::runtime_error {
public:
    InconclusiveError(const std::string& what, Rational bound)
        : std::runtime_error(what), bound_(std::move(bound)) {}
    const Rational& bound() const { return bound_; }

private:
    Rational bound_;
};

/// Raised when an exact operation would leave the rationals (e.g. sqrt(2)).
class NonRationalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Highest exponent kept by multiplicative operations. Default 64,
/// overridable through LIPGEO_MAX_EXP.
struct Resolution {
    Rational max_exponent{64};

    static Resolution from_environment() {
        Resolution r;
        if (const char* env = std::getenv("LIPGEO_MAX_EXP"); env && *env) {
            r.max_exponent = parse_rational(env);
            if (r.max_exponent <= 0) throw ParseError("LIPGEO_MAX_EXP must be positive");
        }
        return r;
    }
};

struct Term {
    Rational exp;
    Rational coeff;
    friend bool operator==(const Term&, const Term&) = default;
};

/// Finite Puiseux-style series sum c_k t^{e_k} with strictly increasing
/// exponents and no zero coefficients. A series may be truncated: then only
/// terms of exponent <= precision() are known.
class Series {
public:
    Series() = default;

    static Series zero() { return {}; }
    static Series constant(const Rational& c) { return monomial(c, 0); }
    static Series monomial(const Rational& c, const Rational& e) {
        Series s;
        if (c != 0) s.terms_.push_back({e, c});
        return s;
    }
    static Series from_terms(std::vector<Term> terms, std::optional<Rational> precision = std::nullopt) {
        Series s;
        s.terms_ = std::move(terms);
        s.precision_ = std::move(precision);
        s.normalize();
        return s;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    bool is_exact() const { return !precision_.has_value(); }
    const std::optional<Rational>& precision() const { return precision_; }

    /// Lowest exponent with nonzero coefficient; the empty series has order infinity.
    /// A truncated empty series has no decidable order.
    Exponent order() const {
        if (!terms_.empty()) return Exponent(terms_.front().exp);
        if (precision_) throw InconclusiveError("series vanishes up to t^" + to_string(*precision_), *precision_);
        return Exponent::infinity();
    }

    const Rational& leading_coefficient() const {
        if (terms_.empty()) throw std::logic_error("leading_coefficient of zero series");
        return terms_.front().coeff;
    }

    /// Sign of the series as a germ: sign of its leading coefficient.
    int sign() const {
        if (terms_.empty()) {
            if (precision_) throw InconclusiveError("sign undecided up to t^" + to_string(*precision_), *precision_);
            return 0;
        }
        return terms_.front().coeff > 0 ? 1 : -1;
    }

    Rational coefficient_at(const Rational& e) const {
        for (const auto& t : terms_)
            if (t.exp == e) return t.coeff;
        return 0;
    }

    Series truncated(const Rational& bound) const {
        Series s;
        for (const auto& t : terms_)
            if (t.exp <= bound) s.terms_.push_back(t);
        s.precision_ = precision_ ? std::min(*precision_, bound) : bound;
        return s;
    }

    /// Drops exponents above the bound but marks the series exact if nothing was dropped.
    Series clipped(const Rational& bound) const {
        bool drops = std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.exp > bound; });
        return drops ? truncated(bound) : *this;
    }

    Series operator-() const {
        Series s = *this;
        for (auto& t : s.terms_) t.coeff = -t.coeff;
        return s;
    }

    friend Series operator+(const Series& a, const Series& b) {
        Series s;
        s.terms_.reserve(a.terms_.size() + b.terms_.size());
        s.terms_.insert(s.terms_.end(), a.terms_.begin(), a.terms_.end());
        s.terms_.insert(s.terms_.end(), b.terms_.begin(), b.terms_.end());
        s.precision_ = min_precision(a.precision_, b.precision_);
        s.normalize();
        return s;
    }

    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

    Series scaled(const Rational& c) const {
        if (c == 0) {
            Series s;
            s.precision_ = precision_;
            return s;
        }
        Series s = *this;
        for (auto& t : s.terms_) t.coeff *= c;
        return s;
    }

    /// Multiplies by t^e.
    Series shifted(const Rational& e) const {
        Series s = *this;
        for (auto& t : s.terms_) t.exp += e;
        if (s.precision_) *s.precision_ += e;
        return s;
    }

    Series multiply(const Series& b, const Resolution& res) const {
        const Series& a = *this;
        Series s;
        // Precision of a product: each factor's unknown tail meets the other's leading order.
        std::optional<Rational> prec;
        if (a.precision_) {
            Rational p = b.terms_.empty() ? *a.precision_ : *a.precision_ + b.terms_.front().exp;
            if (b.terms_.empty() && b.precision_) p = *a.precision_ + *b.precision_;
            prec = p;
        }
        if (b.precision_) {
            Rational p = a.terms_.empty() ? *b.precision_ : *b.precision_ + a.terms_.front().exp;
            if (a.terms_.empty() && a.precision_) p = *a.precision_ + *b.precision_;
            prec = prec ? std::min(*prec, p) : p;
        }
        // Exact zero times anything is exact zero.
        if ((a.terms_.empty() && !a.precision_) || (b.terms_.empty() && !b.precision_)) return Series{};
        s.terms_.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& x : a.terms_)
            for (const auto& y : b.terms_) s.terms_.push_back({x.exp + y.exp, x.coeff * y.coeff});
        s.precision_ = prec;
        s.normalize();
        return s.clipped(res.max_exponent);
    }

    Series pow_integer(unsigned k, const Resolution& res) const {
        Series out = constant(1);
        Series base = *this;
        while (k) {
            if (k & 1u) out = out.multiply(base, res);
            k >>= 1u;
            if (k) base = base.multiply(base, res);
        }
        return out;
    }

    /// s^p for rational p >= 0 via the binomial series around the leading term.
    /// Requires the leading coefficient to be positive with a rational p-th power.
    Series pow(const Rational& p, const Resolution& res) const {
        if (p < 0) throw std::invalid_argument("negative series power");
        if (p == 0) return constant(1);
        if (is_integer(p)) return pow_integer(numerator(p).convert_to<unsigned>(), res);
        if (terms_.empty()) {
            if (precision_) {
                Series s;
                s.precision_ = *precision_ * p;
                return s;
            }
            return Series{};
        }
        const Rational& lc = terms_.front().coeff;
        const Rational& lo = terms_.front().exp;
        if (lc < 0) throw NonRationalError("fractional power of a negative germ");
        auto lcp = rational_power(lc, p);
        if (!lcp) throw NonRationalError("leading coefficient " + to_string(lc) + " has no rational power " + to_string(p));
        // h = s / (lc t^lo) - 1, a series of positive order.
        Series h;
        for (std::size_t i = 1; i < terms_.size(); ++i)
            h.terms_.push_back({terms_[i].exp - lo, terms_[i].coeff / lc});
        if (precision_) h.precision_ = *precision_ - lo;
        Rational base_exp = lo * p;
        Rational budget = res.max_exponent - base_exp;
        Series sum = constant(1);
        if (!h.terms_.empty() || h.precision_) {
            Rational horder = h.terms_.empty() ? *h.precision_ : h.terms_.front().exp;
            Series hk = constant(1);
            Rational binom = 1;
            Resolution local{budget};
            for (unsigned k = 1;; ++k) {
                if (horder * k > budget) break;
                binom = binom * (p - (k - 1)) / k;
                hk = hk.multiply(h, local);
                if (binom == 0) break;
                sum = sum + hk.scaled(binom);
            }
            // Everything past the budget is unknown.
            if (!(h.terms_.empty() && !h.precision_)) sum = sum.truncated(budget);
        }
        Series out = sum.scaled(*lcp).shifted(base_exp);
        return out.clipped(res.max_exponent);
    }

    /// Comparison of germs: sign of (a - b).
    friend int compare_germs(const Series& a, const Series& b) { return (a - b).sign(); }

    friend bool operator==(const Series& a, const Series& b) {
        return a.terms_ == b.terms_ && a.precision_ == b.precision_;
    }

    std::string str() const {
        if (terms_.empty()) return precision_ ? "O(t^" + to_string(*precision_) + ")" : "0";
        std::string out;
        for (const auto& t : terms_) {
            if (!out.empty()) out += t.coeff < 0 ? " - " : " + ";
            else if (t.coeff < 0) out += "-";
            Rational c = t.coeff < 0 ? Rational(-t.coeff) : t.coeff;
            out += to_string(c);
            if (t.exp != 0) out += "*t^" + to_string(t.exp);
        }
        if (precision_) out += " + O(t^" + to_string(*precision_) + ")";
        return out;
    }

private:
    static std::optional<Rational> min_precision(const std::optional<Rational>& a, const std::optional<Rational>& b) {
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }

    void normalize() {
        std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.exp < y.exp; });
        std::vector<Term> merged;
        merged.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().exp == t.exp) merged.back().coeff += t.coeff;
            else merged.push_back(std::move(t));
        }
        terms_.clear();
        for (auto& t : merged) {
            if (t.coeff == 0) continue;
            if (precision_ && t.exp > *precision_) continue;
            terms_.push_back(std::move(t));
        }
    }

    std::vector<Term> terms_;
    std::optional<Rational> precision_;
};

/// Lowest exponent with nonzero coefficient (infinity for the zero series).
inline Exponent series_order(const Series& s) { return s.order(); }

}  // namespace lipgeo
