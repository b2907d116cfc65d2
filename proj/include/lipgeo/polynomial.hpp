#pragma once

// Univariate rational polynomials (exact rational roots, Sturm counts) and
// polynomials in w with Puiseux-in-u coefficients, with a Newton-Puiseux
// search for finite root arcs w = phi(u).

#include "lipgeo/series.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lipgeo {

/// Root arc that is real but not a finite rational Puiseux expansion.
class NonAdmissibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

    Rational operator()(const Rational& x) const {
        Rational v = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
        return v;
    }

    UPoly derivative() const {
        std::vector<Rational> d;
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long long>(i));
        return UPoly(d);
    }

    /// Quotient and remainder.
    std::pair<UPoly, UPoly> divmod(const UPoly& b) const {
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        std::vector<Rational> r = c_;
        std::vector<Rational> q(c_.size() >= b.c_.size() ? c_.size() - b.c_.size() + 1 : 0);
        for (int i = static_cast<int>(r.size()) - 1; i >= b.degree(); --i) {
            Rational f = r[i] / b.lead();
            if (f == 0) continue;
            q[i - b.degree()] = f;
            for (int j = 0; j <= b.degree(); ++j) r[i - b.degree() + j] -= f * b.c_[j];
        }
        return {UPoly(q), UPoly(r)};
    }

    /// Number of distinct real roots in (a, b].
    int sturm_count(const Rational& a, const Rational& b) const {
        if (degree() < 1) return 0;
        std::vector<UPoly> seq{*this, derivative()};
        while (!seq.back().is_zero()) {
            auto r = seq[seq.size() - 2].divmod(seq.back()).second;
            if (r.is_zero()) break;
            seq.push_back(UPoly(negated(r.c_)));
        }
        auto changes = [&](const Rational& x) {
            int n = 0, prev = 0;
            for (const auto& p : seq) {
                Rational v = p(x);
                int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
                if (s == 0) continue;
                if (prev != 0 && s != prev) ++n;
                prev = s;
            }
            return n;
        };
        return changes(a) - changes(b);
    }

    /// Bound on the absolute value of every real root (Cauchy).
    Rational root_bound() const {
        Rational m = 0;
        for (int i = 0; i < degree(); ++i) m = std::max(m, abs(c_[i] / lead()));
        return m + 1;
    }

    /// Distinct rational roots, ascending.
    std::vector<Rational> rational_roots() const {
        std::vector<Rational> out;
        if (degree() < 1) return out;
        std::size_t lo = 0;
        while (lo < c_.size() && c_[lo] == 0) ++lo;
        if (lo > 0) out.push_back(0);
        // Integer coefficients of p(x) / x^lo.
        Integer l = 1;
        for (std::size_t i = lo; i < c_.size(); ++i) l = lcm(l, denominator(c_[i]));
        std::vector<Integer> z;
        for (std::size_t i = lo; i < c_.size(); ++i) z.push_back(numerator(c_[i] * l));
        if (z.size() > 1) {
            for (const auto& p : divisors(abs(z.front())))
                for (const auto& q : divisors(abs(z.back())))
                    for (int sign : {1, -1}) {
                        Rational r = make_rational(sign * p, q);
                        if ((*this)(r) == 0) out.push_back(r);
                    }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Removes the given roots (all multiplicities).
    UPoly deflated(const std::vector<Rational>& roots) const {
        UPoly p = *this;
        for (const auto& r : roots) {
            UPoly lin({-r, 1});
            while (p.degree() >= 1) {
                auto [q, rem] = p.divmod(lin);
                if (!rem.is_zero()) break;
                p = q;
            }
        }
        return p;
    }

private:
    static Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }
    static Integer abs(const Integer& r) { return r < 0 ? Integer(-r) : r; }
    static Integer lcm(const Integer& a, const Integer& b) { return a / boost::multiprecision::gcd(a, b) * b; }

    static std::vector<Integer> divisors(const Integer& n) {
        if (n > Integer(1) << 62) throw NonAdmissibleError("coefficient too large for rational root search");
        long long v = n.convert_to<long long>();
        std::vector<Integer> out;
        for (long long d = 1; d * d <= v; ++d)
            if (v % d == 0) {
                out.push_back(d);
                if (d != v / d) out.push_back(v / d);
            }
        return out;
    }

    static std::vector<Rational> negated(std::vector<Rational> v) {
        for (auto& x : v) x = -x;
        return v;
    }

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

/// Polynomial in w whose coefficients are finite exact Puiseux series in u.
class BiPoly {
public:
    BiPoly() = default;

    static BiPoly monomial(const Rational& c, const Rational& pu, unsigned pw) {
        BiPoly p;
        if (c != 0) p.c_[pw] = Series::monomial(c, pu);
        return p;
    }
    static BiPoly from_series(const Series& s) {
        BiPoly p;
        if (!s.empty()) p.c_[0] = s;
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    const std::map<unsigned, Series>& coeffs() const { return c_; }
    unsigned degree() const { return c_.empty() ? 0 : c_.rbegin()->first; }

    Series coeff(unsigned k) const {
        auto it = c_.find(k);
        return it == c_.end() ? Series::zero() : it->second;
    }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        BiPoly out = a;
        for (const auto& [k, s] : b.c_) out.add(k, s);
        return out;
    }
    BiPoly operator-() const {
        BiPoly out = *this;
        for (auto& [k, s] : out.c_) s = -s;
        return out;
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }

    BiPoly multiply(const BiPoly& b, const Resolution& res) const {
        BiPoly out;
        for (const auto& [i, x] : c_)
            for (const auto& [j, y] : b.c_) out.add(i + j, x.multiply(y, res));
        return out;
    }

    /// P(u, phi + y) as a polynomial in y.
    BiPoly shifted(const Series& phi, const Resolution& res) const {
        BiPoly out;
        for (const auto& [k, s] : c_) {
            // (phi + y)^k = sum_j binom(k, j) phi^(k-j) y^j
            Series phik = Series::constant(1);
            std::vector<Series> powers{phik};
            for (unsigned j = 1; j <= k; ++j) powers.push_back(powers.back().multiply(phi, res));
            Integer binom = 1;
            for (unsigned j = 0; j <= k; ++j) {
                out.add(j, s.multiply(powers[k - j], res).scaled(Rational(binom)));
                binom = binom * (k - j) / (j + 1);
            }
        }
        return out;
    }

    Series evaluate(const Series& w, const Resolution& res) const {
        Series out;
        for (const auto& [k, s] : c_) out = out + s.multiply(w.pow_integer(k, res), res);
        return out;
    }

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.c_ == b.c_; }
    friend bool operator<(const BiPoly& a, const BiPoly& b) { return a.str() < b.str(); }

    std::string str() const {
        std::string out;
        for (const auto& [k, s] : c_) {
            if (!out.empty()) out += " + ";
            out += "(" + s.str() + ")*w^" + std::to_string(k);
        }
        return out.empty() ? "0" : out;
    }

private:
    void add(unsigned k, const Series& s) {
        if (s.empty()) return;
        auto it = c_.find(k);
        if (it == c_.end()) {
            c_.emplace(k, s);
            return;
        }
        it->second = it->second + s;
        if (it->second.empty()) c_.erase(it);
    }

    std::map<unsigned, Series> c_;
};

struct RootSearch {
    Rational min_lead_exponent = 1;  ///< first term exponent must be at least this
    unsigned depth = 3;              ///< Newton-Puiseux steps per root
    Resolution res{};
    /// Optional filter on the first step: real interval the first coefficient
    /// must lie in when its exponent equals min_lead_exponent.
    std::optional<std::pair<Rational, Rational>> lead_window;
};

namespace detail {

// Candidate (slope, characteristic polynomial) pairs from the Newton polygon
// of sum_k a_k(u) y^k, restricted to slopes above `floor_exp` (strictly when
// `strict`).
inline std::vector<std::pair<Rational, UPoly>> newton_edges(const BiPoly& p, const Rational& floor_exp, bool strict) {
    std::vector<std::pair<unsigned, Series>> pts(p.coeffs().begin(), p.coeffs().end());
    std::set<Rational> slopes;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Rational oi = pts[i].second.order().value(), oj = pts[j].second.order().value();
            Rational s = (oi - oj) / Rational(static_cast<long long>(pts[j].first - pts[i].first));
            if (s > floor_exp || (!strict && s == floor_exp)) slopes.insert(s);
        }
    std::vector<std::pair<Rational, UPoly>> out;
    for (const auto& s : slopes) {
        std::optional<Rational> m;
        for (const auto& [k, a] : pts) {
            Rational v = a.order().value() + s * static_cast<long long>(k);
            if (!m || v < *m) m = v;
        }
        std::vector<Rational> cp(pts.back().first + 1);
        int hits = 0;
        for (const auto& [k, a] : pts)
            if (a.order().value() + s * static_cast<long long>(k) == *m) {
                cp[k] = a.leading_coefficient();
                ++hits;
            }
        if (hits >= 2) out.emplace_back(s, UPoly(cp));
    }
    return out;
}

inline void find_roots(const BiPoly& p, const Series& prefix, const Rational& last_exp, unsigned steps_left,
                       const RootSearch& opt, bool first, std::vector<Series>& out) {
    BiPoly q = p;
    if (q.coeff(0).empty()) {
        out.push_back(prefix);
        // Divide by the largest power of y and keep looking for non-zero roots.
        unsigned lo = q.coeffs().begin()->first;
        BiPoly r;
        for (const auto& [k, s] : q.coeffs()) r = r + BiPoly::from_series(s).multiply(BiPoly::monomial(1, 0, k - lo), opt.res);
        q = r;
    }
    if (q.degree() == 0) return;
    for (const auto& [s, cp] : newton_edges(q, first ? opt.min_lead_exponent : last_exp, !first)) {
        if (s > opt.res.max_exponent) continue;
        auto roots = cp.rational_roots();
        roots.erase(std::remove(roots.begin(), roots.end(), Rational(0)), roots.end());
        // Which real roots matter: on the first step only those that can start an arc inside the window.
        Rational lo = -cp.root_bound(), hi = cp.root_bound();
        if (first && s == opt.min_lead_exponent && opt.lead_window) {
            lo = opt.lead_window->first;
            hi = opt.lead_window->second;
        } else if (first) {
            lo = 0;
        }
        UPoly rest = cp.deflated(roots);
        // Zero is never a root of interest here.
        UPoly rest_nz = rest.deflated({Rational(0)});
        int extra = rest_nz.sturm_count(lo, hi);
        if (extra > 0)
            throw NonAdmissibleError("root arc " + prefix.str() + " + r*u^" + to_string(s) +
                                     " has an irrational real coefficient r");
        for (const auto& r : roots) {
            if (r <= lo || r > hi) continue;
            if (steps_left == 0)
                throw InconclusiveError("root arc starting " + prefix.str() + " needs more than the configured depth",
                                        s);
            Series next = prefix + Series::monomial(r, s);
            BiPoly shifted = q.shifted(Series::monomial(r, s), opt.res);
            find_roots(shifted, next, s, steps_left - 1, opt, false, out);
        }
    }
}

}  // namespace detail

/// Real root arcs w = phi(u) of P with phi a finite Puiseux sum of at most
/// `depth` terms. Roots needing more terms raise InconclusiveError; real
/// irrational coefficients raise NonAdmissibleError. The zero arc is
/// reported when P(u, 0) vanishes.
inline std::vector<Series> root_arcs(const BiPoly& p, const RootSearch& opt) {
    std::vector<Series> out;
    if (p.is_zero() || p.degree() == 0) return out;
    detail::find_roots(p, Series::zero(), opt.min_lead_exponent, opt.depth, opt, true, out);
    std::sort(out.begin(), out.end(), [](const Series& a, const Series& b) { return compare_germs(a, b) < 0; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace lipgeo
