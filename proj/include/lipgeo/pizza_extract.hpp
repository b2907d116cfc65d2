#pragma once

// Minimal pizza of an admissible function on the standard triangle
// T_beta = {0 <= w <= u^beta}.
//
// Outline: every sign change of an abs/min/max argument and every zero of
// f happens along a root arc of some branch polynomial. Those arcs (plus the
// two boundary arcs) are the centers. Between consecutive centers phi_a <
// phi_b, f agrees with one polynomial E(u, w), and along the fan
// phi_a + c u^alpha the order is min_k (o_k + k alpha), where o_k are the
// u-orders of E(u, phi_a + y) = sum b_k y^k. Each linear piece of that
// envelope is a slice: width alpha, order o + k alpha.

#include "lipgeo/arc.hpp"
#include "lipgeo/expr.hpp"
#include "lipgeo/pizza.hpp"
#include "lipgeo/polynomial.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lipgeo {

struct ExtractOptions {
    unsigned depth = 3;  ///< Newton-Puiseux terms per center arc
    Resolution res{};
    std::size_t max_branches = 4096;
};

/// Slice with the arcs that realize it. Arcs are w(u) series.
struct GeometricSlice {
    PizzaSlice slice;
    Series left;
    Series right;
    std::optional<Series> support;  ///< none for point slices
};

struct ScannedArc {
    Series w;
    Exponent order;  ///< symbolic order of f on (u, w(u))
};

struct ExtractedPizza {
    AbstractPizza pizza;
    std::vector<GeometricSlice> slices;
    std::vector<Series> centers;
    std::vector<ScannedArc> scanned;
};

namespace detail {

inline std::vector<BiPoly> branches(const Expr& f, const ExtractOptions& opt) {
    const auto& n = f.node();
    auto dedupe = [&](std::vector<BiPoly> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.size() > opt.max_branches) throw NonAdmissibleError("expression has too many sign branches");
        return v;
    };
    switch (n.op) {
    case Expr::Op::mono: {
        if (!is_integer(n.pw)) throw NonAdmissibleError("pizza extraction needs integer w-exponents");
        return {BiPoly::monomial(n.c, n.pu, numerator(n.pw).convert_to<unsigned>())};
    }
    case Expr::Op::abs: {
        std::vector<BiPoly> out;
        for (const auto& x : branches(n.args[0], opt)) {
            out.push_back(x);
            out.push_back(-x);
        }
        return dedupe(out);
    }
    case Expr::Op::min:
    case Expr::Op::max: {
        std::vector<BiPoly> out;
        for (const auto& a : n.args)
            for (const auto& x : branches(a, opt)) out.push_back(x);
        return dedupe(out);
    }
    case Expr::Op::add:
    case Expr::Op::sub:
    case Expr::Op::mul: {
        std::vector<BiPoly> acc = branches(n.args[0], opt);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
            std::vector<BiPoly> next;
            for (const auto& x : acc)
                for (const auto& y : branches(n.args[i], opt)) {
                    if (n.op == Expr::Op::add) next.push_back(x + y);
                    else if (n.op == Expr::Op::sub) next.push_back(x - y);
                    else next.push_back(x.multiply(y, opt.res));
                }
            acc = dedupe(next);
        }
        return acc;
    }
    }
    throw std::logic_error("bad expression node");
}

// Polynomials whose root arcs may separate regimes of f.
inline void critical_polys(const Expr& f, const ExtractOptions& opt, std::vector<BiPoly>& out) {
    const auto& n = f.node();
    for (const auto& a : n.args) critical_polys(a, opt, out);
    if (n.op == Expr::Op::abs) {
        for (const auto& x : branches(n.args[0], opt)) out.push_back(x);
    } else if (n.op == Expr::Op::min || n.op == Expr::Op::max) {
        for (std::size_t i = 0; i < n.args.size(); ++i)
            for (std::size_t j = i + 1; j < n.args.size(); ++j)
                for (const auto& x : branches(n.args[i], opt))
                    for (const auto& y : branches(n.args[j], opt)) out.push_back(x - y);
    }
}

// The single branch polynomial f agrees with near the arc w.
inline BiPoly resolve(const Expr& f, const Series& w, const ExtractOptions& opt) {
    const Series u = Series::monomial(1, 1);
    const auto& n = f.node();
    switch (n.op) {
    case Expr::Op::mono: return BiPoly::monomial(n.c, n.pu, numerator(n.pw).convert_to<unsigned>());
    case Expr::Op::abs: {
        BiPoly x = resolve(n.args[0], w, opt);
        return substitute(n.args[0], u, w, opt.res).sign() < 0 ? -x : x;
    }
    case Expr::Op::min:
    case Expr::Op::max: {
        std::size_t best = 0;
        Series bv = substitute(n.args[0], u, w, opt.res);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
            Series v = substitute(n.args[i], u, w, opt.res);
            int sg = (v - bv).sign();
            if ((n.op == Expr::Op::min && sg < 0) || (n.op == Expr::Op::max && sg > 0)) {
                best = i;
                bv = v;
            }
        }
        return resolve(n.args[best], w, opt);
    }
    default: {
        BiPoly acc = resolve(n.args[0], w, opt);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
            BiPoly y = resolve(n.args[i], w, opt);
            if (n.op == Expr::Op::add) acc = acc + y;
            else if (n.op == Expr::Op::sub) acc = acc - y;
            else acc = acc.multiply(y, opt.res);
        }
        return acc;
    }
    }
}

struct EnvelopePiece {
    Rational lo;
    Exponent hi;
    unsigned slope;
    Exponent intercept;  ///< order is intercept + slope * alpha

    Exponent at(const Exponent& alpha) const {
        if (intercept.is_infinite()) return intercept;
        if (alpha.is_infinite()) return slope == 0 ? intercept : Exponent::infinity();
        return Exponent(intercept.value() + alpha.value() * static_cast<long long>(slope));
    }
};

// Lower envelope of o_k + k alpha over alpha in [kappa, inf).
inline std::vector<EnvelopePiece> envelope(const BiPoly& shifted, const Rational& kappa) {
    std::vector<std::pair<unsigned, Rational>> lines;
    for (const auto& [k, s] : shifted.coeffs()) lines.emplace_back(k, s.order().value());
    if (lines.empty()) return {{kappa, Exponent::infinity(), 0, Exponent::infinity()}};
    auto value = [](const std::pair<unsigned, Rational>& l, const Rational& a) { return l.second + a * static_cast<long long>(l.first); };
    std::vector<EnvelopePiece> out;
    Rational alpha = kappa;
    std::size_t cur = 0;
    for (std::size_t i = 1; i < lines.size(); ++i)
        if (value(lines[i], alpha) < value(lines[cur], alpha)) cur = i;  // ascending k keeps the smallest slope on ties
    while (true) {
        const auto& c = lines[cur];
        std::optional<Rational> next;
        std::size_t nxt = cur;
        for (std::size_t j = 0; j < cur; ++j) {
            Rational x = (lines[j].second - c.second) / Rational(static_cast<long long>(c.first - lines[j].first));
            if (x > alpha && (!next || x < *next)) {
                next = x;
                nxt = j;
            } else if (next && x == *next && j < nxt) {
                nxt = j;
            }
        }
        if (!next) {
            out.push_back({alpha, Exponent::infinity(), c.first, Exponent(c.second)});
            break;
        }
        out.push_back({alpha, Exponent(*next), c.first, Exponent(c.second)});
        alpha = *next;
        cur = nxt;
    }
    return out;
}

inline bool in_triangle(const Series& w, const Rational& beta) {
    return w.sign() >= 0 && (Series::monomial(1, beta) - w).sign() >= 0;
}

inline std::vector<GeometricSlice> minimalize_geometric(std::vector<GeometricSlice> s) {
    auto get = [](const GeometricSlice& g) -> const PizzaSlice& { return g.slice; };
    while (auto m = next_merge(s, get)) {
        std::size_t i = m->first;
        GeometricSlice g{m->second, s[i].left, s[i + 1].right, std::nullopt};
        if (!g.slice.is_point()) {
            if (s[i].slice.is_point()) g.support = s[i + 1].support;
            else if (s[i + 1].slice.is_point()) g.support = s[i].support;
            else g.support = g.slice.supporting_end() == SupportingEnd::in ? s[i].support : s[i + 1].support;
        }
        s[i] = std::move(g);
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    }
    return s;
}

}  // namespace detail

/// Center arcs of f inside T_beta, sorted from w = 0 to w = u^beta.
inline std::vector<Series> pizza_centers(const Expr& f, const Rational& beta, const ExtractOptions& opt = {}) {
    std::vector<BiPoly> polys;
    detail::critical_polys(f, opt, polys);
    for (const auto& b : detail::branches(f, opt)) polys.push_back(b);
    std::sort(polys.begin(), polys.end());
    polys.erase(std::unique(polys.begin(), polys.end()), polys.end());

    std::vector<Series> centers{Series::zero(), Series::monomial(1, beta)};
    RootSearch rs;
    rs.min_lead_exponent = beta;
    rs.depth = opt.depth;
    rs.res = opt.res;
    rs.lead_window = std::make_pair(Rational(0), Rational(1));
    for (const auto& p : polys)
        for (const auto& r : root_arcs(p, rs))
            if (detail::in_triangle(r, beta)) centers.push_back(r);
    std::sort(centers.begin(), centers.end(), [](const Series& a, const Series& b) { return compare_germs(a, b) < 0; });
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    return centers;
}

/// Minimal pizza of f on T_beta. Throws NonAdmissibleError when a center arc
/// is not a finite rational expansion and InconclusiveError when it needs
/// more than opt.depth terms or the resolution bound is hit.
inline ExtractedPizza extract_pizza(const Expr& f, const Exponent& triangle_beta, const ExtractOptions& opt = {}) {
    if (triangle_beta.is_infinite() || triangle_beta < Exponent(1))
        throw std::invalid_argument("triangle exponent must be a finite rational >= 1");
    if (!has_integer_w_exponents(f)) throw NonAdmissibleError("pizza extraction needs integer w-exponents");
    const Rational beta = triangle_beta.value();
    ExtractedPizza out;
    out.centers = pizza_centers(f, beta, opt);

    auto check = [&](const Series& w, const Exponent& expected) {
        Exponent got = ord_on_arc(f, Arc::planar(w), opt.res);
        if (got != expected)
            throw std::logic_error("pizza extraction: order " + got.str() + " on w = " + w.str() + " disagrees with " +
                                   expected.str());
        out.scanned.push_back({w, got});
    };

    std::vector<GeometricSlice> raw;
    for (std::size_t c = 0; c + 1 < out.centers.size(); ++c) {
        const Series& pa = out.centers[c];
        const Series& pb = out.centers[c + 1];
        const Series gap = pb - pa;
        const Rational kappa = gap.order().value();
        const Series mid = pa + gap.scaled(Rational(1, 2));
        const BiPoly e = detail::resolve(f, mid, opt);
        if (!(e.evaluate(mid, opt.res) == substitute(f, Series::monomial(1, 1), mid, opt.res)))
            throw std::logic_error("pizza extraction: branch resolution mismatch");

        for (int side = 0; side < 2; ++side) {
            const Series& center = side == 0 ? pa : pb;
            const Rational sign = side == 0 ? 1 : -1;
            auto pieces = detail::envelope(e.shifted(center, opt.res), kappa);
            auto arc_at = [&](const Exponent& alpha) {
                if (alpha.is_infinite()) return center;
                if (alpha.value() == kappa) return mid;
                return center + Series::monomial(sign, alpha.value());
            };
            for (const auto& p : pieces) {
                // Scan: both ends, an interior exponent, and a second coefficient.
                std::vector<Rational> probes{p.lo};
                if (p.hi.is_finite()) probes.push_back((p.lo + p.hi.value()) / 2);
                else probes.push_back(p.lo + 1);
                for (const auto& a : probes) {
                    if (a == kappa) {
                        check(mid, p.at(a));
                        check(pa + gap.scaled(Rational(1, 3)), p.at(a));
                    } else {
                        check(center + Series::monomial(sign, a), p.at(a));
                        check(center + Series::monomial(2 * sign, a), p.at(a));
                    }
                }
            }
            check(center, pieces.back().at(Exponent::infinity()));

            std::vector<GeometricSlice> side_slices;
            for (const auto& p : pieces) {
                Exponent q_lo = p.at(p.lo), q_hi = p.at(p.hi);
                GeometricSlice g;
                if (p.slope == 0) {
                    g.slice = PizzaSlice::point(q_lo, p.lo);
                } else {
                    WidthFunction mu{Rational(1, static_cast<long long>(p.slope)),
                                     -p.intercept.value() / static_cast<long long>(p.slope)};
                    g.slice = side == 0 ? PizzaSlice::affine(q_hi, q_lo, mu) : PizzaSlice::affine(q_lo, q_hi, mu);
                    g.support = arc_at(p.hi);
                }
                g.left = side == 0 ? arc_at(p.hi) : arc_at(p.lo);
                g.right = side == 0 ? arc_at(p.lo) : arc_at(p.hi);
                side_slices.push_back(std::move(g));
            }
            if (side == 0) std::reverse(side_slices.begin(), side_slices.end());
            raw.insert(raw.end(), side_slices.begin(), side_slices.end());
        }
    }

    AbstractPizza unmerged;
    unmerged.triangle_beta = triangle_beta;
    for (const auto& g : raw) unmerged.slices.push_back(g.slice);
    if (auto errors = validate(unmerged); !errors.empty())
        throw NonAdmissibleError("extracted slices violate the pizza conditions (is f Lipschitz?): " + errors.front());
    out.slices = detail::minimalize_geometric(raw);
    out.pizza.triangle_beta = triangle_beta;
    for (const auto& g : out.slices) out.pizza.slices.push_back(g.slice);
    return out;
}

/// Width of an arc of T_beta: tord with the supporting arc of its slice, or
/// the slice exponent on point slices.
inline Exponent width_at_arc(const ExtractedPizza& p, const Arc& g) {
    if (g.dim() != 2 || g.param() != Parameterization::coordinate || g.axis() != std::size_t{0})
        throw ArcError("width_at_arc needs a planar arc with u = t");
    const Series& w = g.coord(1);
    const Rational beta = p.pizza.triangle_beta.value();
    if (!detail::in_triangle(w, beta)) throw ArcError("arc lies outside the triangle");
    for (const auto& s : p.slices) {
        if (compare_germs(w, s.left) < 0 || compare_germs(w, s.right) > 0) continue;
        if (s.slice.is_point()) return s.slice.beta;
        // Past the supporting arc the width stays at its maximum.
        return min((w - *s.support).order(), s.slice.mu(s.slice.q_max()));
    }
    throw std::logic_error("width_at_arc: arc not covered by any slice");
}

inline Exponent width_at_arc(const Expr& f, const Exponent& triangle_beta, const Arc& g, const ExtractOptions& opt = {}) {
    return width_at_arc(extract_pizza(f, triangle_beta, opt), g);
}

/// A Hölder triangle given by its boundary arcs plus interior sample arcs.
struct TriangleSample {
    Arc first;
    Arc second;
    std::vector<Arc> interior;

    std::vector<Arc> all() const {
        std::vector<Arc> v{first, second};
        v.insert(v.end(), interior.begin(), interior.end());
        return v;
    }
};

struct TwoTriangleReport {
    bool holds = true;
    std::vector<std::string> failures;
};

/// tord(g1, T') = tord(g1, g1') = tord(g1', T), and the same for the second
/// boundary arcs, evaluated on the samples.
inline TwoTriangleReport check_two_triangle_condition(const TriangleSample& t, const TriangleSample& tp) {
    if (t.interior.empty() || tp.interior.empty()) throw std::invalid_argument("two-triangle check needs interior samples");
    TwoTriangleReport r;
    auto to_set = [](const Arc& g, const TriangleSample& s) { return arc_set_tord(g, ArcFamily(s.all())); };
    auto one = [&](const Arc& g, const Arc& gp, const std::string& name) {
        Exponent a = to_set(g, tp), b = arc_tord(g, gp), c = to_set(gp, t);
        if (a != b) r.failures.push_back("tord(" + name + ",T')=" + a.str() + " != tord(" + name + "," + name + "')=" + b.str());
        if (b != c) r.failures.push_back("tord(" + name + "," + name + "')=" + b.str() + " != tord(" + name + "',T)=" + c.str());
    };
    one(t.first, tp.first, "gamma1");
    one(t.second, tp.second, "gamma2");
    r.holds = r.failures.empty();
    return r;
}

}  // namespace lipgeo
