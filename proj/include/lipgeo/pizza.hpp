#pragma once

#include "lipgeo/exponent.hpp"
#include "lipgeo/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lipgeo {

/// mu(q) = a q + b. At an infinite endpoint mu is infinite when a > 0 and
/// equals b when a = 0.
struct WidthFunction {
    Rational a = 0;
    Rational b = 0;

    Exponent operator()(const Exponent& q) const {
        if (q.is_infinite()) return a > 0 ? Exponent::infinity() : Exponent(b);
        return Exponent(a * q.value() + b);
    }
    friend bool operator==(const WidthFunction&, const WidthFunction&) = default;
};

enum class SupportingEnd { in, out, none };

inline std::string to_string(SupportingEnd e) {
    switch (e) {
    case SupportingEnd::in: return "in";
    case SupportingEnd::out: return "out";
    case SupportingEnd::none: return "none";
    }
    return "?";
}

struct PizzaSlice {
    Exponent q_in;
    Exponent q_out;
    Exponent beta;
    WidthFunction mu;  ///< (0, beta) for a point slice

    bool is_point() const { return q_in == q_out; }
    Exponent q_min() const { return min(q_in, q_out); }
    Exponent q_max() const { return max(q_in, q_out); }

    /// Boundary arc where mu is largest; mu is increasing so it is the larger q.
    SupportingEnd supporting_end() const {
        if (is_point()) return SupportingEnd::none;
        return q_in > q_out ? SupportingEnd::in : SupportingEnd::out;
    }

    static PizzaSlice point(const Exponent& q, const Exponent& beta) {
        return {q, q, beta, {0, beta.is_finite() ? beta.value() : Rational(0)}};
    }

    /// Non-point slice; beta is derived as mu at the smaller end.
    static PizzaSlice affine(const Exponent& q_in, const Exponent& q_out, const WidthFunction& mu) {
        PizzaSlice s{q_in, q_out, 0, mu};
        s.beta = mu(s.q_min());
        return s;
    }

    friend bool operator==(const PizzaSlice& x, const PizzaSlice& y) {
        if (x.q_in != y.q_in || x.q_out != y.q_out || x.beta != y.beta) return false;
        return x.is_point() || x.mu == y.mu;
    }
};

struct AbstractPizza {
    std::vector<PizzaSlice> slices;
    Exponent triangle_beta = 1;

    friend bool operator==(const AbstractPizza&, const AbstractPizza&) = default;
};

/// Violations of the abstract-pizza clauses, one message per failure.
/// Point slices (Q a single value) carry only their exponent; the bound
/// mu <= q is enforced on interval slices.
inline std::vector<std::string> validate(const AbstractPizza& p) {
    std::vector<std::string> v;
    if (p.slices.empty()) v.push_back("pizza has no slices");
    if (p.triangle_beta < Exponent(1)) v.push_back("triangle exponent below 1");
    for (std::size_t i = 0; i < p.slices.size(); ++i) {
        const auto& s = p.slices[i];
        std::string tag = "slice " + std::to_string(i) + ": ";
        if (s.q_min() < Exponent(1)) v.push_back(tag + "q below 1");
        if (s.beta < p.triangle_beta) v.push_back(tag + "beta " + s.beta.str() + " below the triangle exponent");
        if (i + 1 < p.slices.size() && s.q_out != p.slices[i + 1].q_in)
            v.push_back(tag + "q_out " + s.q_out.str() + " does not match next q_in " + p.slices[i + 1].q_in.str());
        if (s.is_point()) {
            if (s.mu.a != 0 || (s.beta.is_finite() && s.mu.b != s.beta.value()))
                v.push_back(tag + "point slice width must be the constant beta");
            continue;
        }
        if (s.mu.a == 0) {
            v.push_back(tag + "mu must be non-constant when Q is not a point");
            continue;
        }
        if (s.mu.a < 0) v.push_back(tag + "mu must increase toward the supporting arc (a > 0)");
        // mu(q) <= q is affine in q, so the endpoints decide it.
        for (const auto& q : {s.q_min(), s.q_max()}) {
            if (q.is_infinite()) {
                if (s.mu.a > 1) v.push_back(tag + "mu(q)<=q fails as q -> inf");
                continue;
            }
            if (s.mu(q) > q) v.push_back(tag + "mu(q)<=q fails at q=" + q.str());
        }
        if (s.mu(s.q_min()) != s.beta)
            v.push_back(tag + "min of mu is " + s.mu(s.q_min()).str() + ", not beta " + s.beta.str());
    }
    return v;
}

namespace detail {

enum class Direction { up, down, flat };

inline Direction direction(const PizzaSlice& s) {
    if (s.is_point()) return Direction::flat;
    return s.q_out > s.q_in ? Direction::up : Direction::down;
}

/// Union of two adjacent slices when it is again a slice.
inline std::optional<PizzaSlice> merge(const PizzaSlice& x, const PizzaSlice& y) {
    if (x.q_out != y.q_in) return std::nullopt;
    if (x.is_point() && y.is_point()) return PizzaSlice::point(x.q_in, min(x.beta, y.beta));
    if (x.is_point() != y.is_point()) {
        const PizzaSlice& p = x.is_point() ? x : y;
        const PizzaSlice& s = x.is_point() ? y : x;
        // The point's arcs extend the interval slice only if they carry its width there.
        if (s.mu(p.q_in) != p.beta) return std::nullopt;
        return s;
    }
    if (direction(x) != direction(y) || !(x.mu == y.mu)) return std::nullopt;
    return PizzaSlice::affine(x.q_in, y.q_out, x.mu);
}

/// Next adjacent pair to merge: runs of point slices collapse first, so a
/// point is only absorbed into an interval slice with the run's full width.
/// Otherwise the result would depend on traversal direction.
template <class Slices, class Get>
std::optional<std::pair<std::size_t, PizzaSlice>> next_merge(const Slices& s, Get get) {
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const PizzaSlice &x = get(s[i]), &y = get(s[i + 1]);
            if (pass == 0 && !(x.is_point() && y.is_point())) continue;
            if (auto m = merge(x, y)) return std::pair{i, *m};
        }
    return std::nullopt;
}

}  // namespace detail

/// Merges adjacent slices until no union is a slice.
inline AbstractPizza minimalize(const AbstractPizza& p) {
    auto errors = validate(p);
    if (!errors.empty()) throw std::invalid_argument("minimalize: invalid pizza: " + errors.front());
    AbstractPizza out = p;
    auto id = [](const PizzaSlice& s) -> const PizzaSlice& { return s; };
    while (auto m = detail::next_merge(out.slices, id)) {
        out.slices[m->first] = m->second;
        out.slices.erase(out.slices.begin() + static_cast<std::ptrdiff_t>(m->first) + 1);
    }
    return out;
}

/// Same pizza traversed from the other boundary arc.
inline AbstractPizza reversed(const AbstractPizza& p) {
    AbstractPizza out;
    out.triangle_beta = p.triangle_beta;
    for (auto it = p.slices.rbegin(); it != p.slices.rend(); ++it) {
        PizzaSlice s = *it;
        std::swap(s.q_in, s.q_out);
        out.slices.push_back(s);
    }
    return out;
}

/// Combinatorial equivalence of the minimal pizzas. Unoriented mode also
/// accepts the reversed traversal.
inline bool equivalent(const AbstractPizza& a, const AbstractPizza& b, bool oriented = true) {
    AbstractPizza ma = minimalize(a), mb = minimalize(b);
    if (ma == mb) return true;
    return !oriented && ma == minimalize(reversed(mb));
}

namespace io {

inline json to_json(const WidthFunction& mu) { return {{"a", to_string(mu.a)}, {"b", to_string(mu.b)}}; }

inline json to_json(const PizzaSlice& s) {
    return {{"q_in", s.q_in.str()}, {"q_out", s.q_out.str()}, {"beta", s.beta.str()}, {"mu", to_json(s.mu)}};
}

inline json to_json(const AbstractPizza& p) {
    json slices = json::array();
    for (const auto& s : p.slices) slices.push_back(to_json(s));
    return {{"triangle_beta", p.triangle_beta.str()}, {"slices", slices}};
}

inline AbstractPizza pizza_from_json(const json& j) {
    try {
        AbstractPizza p;
        p.triangle_beta = j.contains("triangle_beta") ? exponent_from_json(j.at("triangle_beta")) : Exponent(1);
        for (const auto& js : j.at("slices")) {
            PizzaSlice s;
            s.q_in = exponent_from_json(js.at("q_in"));
            s.q_out = exponent_from_json(js.at("q_out"));
            s.beta = exponent_from_json(js.at("beta"));
            if (js.contains("mu")) {
                s.mu.a = rational_from_json(js.at("mu").at("a"));
                s.mu.b = rational_from_json(js.at("mu").at("b"));
            } else if (s.is_point() && s.beta.is_finite()) {
                s.mu.b = s.beta.value();
            } else {
                throw ParseError("interval slice needs \"mu\"");
            }
            p.slices.push_back(s);
        }
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("pizza: ") + e.what());
    }
}

}  // namespace io

}  // namespace lipgeo
