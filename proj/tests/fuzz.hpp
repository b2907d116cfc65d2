#pragma once

// Seeded generators shared by the property tests and the acceptance binary.

#include "lipgeo/arc.hpp"
#include "lipgeo/complex.hpp"
#include "lipgeo/expr.hpp"
#include "lipgeo/pizza.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace lipgeo::fuzz {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Random p/q in [1, max] with q <= max_den.
inline Rational random_beta(Rng& rng, int max_den = 4, int max = 5) {
    int q = uniform(rng, 1, max_den);
    int p = uniform(rng, q, max * q);
    return Rational(p, q);
}

inline std::string vname(std::size_t i) { return "v" + std::to_string(i); }

/// At most `max_v` vertices and `max_e` edges, no isolated vertices.
inline HolderComplex random_complex(Rng& rng, int max_v = 12, int max_e = 20, int max_den = 4) {
    int n = uniform(rng, 2, max_v);
    int min_e = (n + 1) / 2;
    int m = uniform(rng, min_e, std::max(min_e, max_e));
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(vname(i));
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<EdgeSpec> edges;
    auto add = [&](int a, int b) {
        edges.push_back({"g" + std::to_string(edges.size()), names[a], names[b], random_beta(rng, max_den)});
    };
    for (int i = 0; i + 1 < n; i += 2) add(perm[i], perm[i + 1]);
    if (n % 2) add(perm[n - 1], perm[0]);
    while (static_cast<int>(edges.size()) < m) {
        int a = uniform(rng, 0, n - 1), b = uniform(rng, 0, n - 2);
        if (b >= a) ++b;
        add(a, b);
    }
    return HolderComplex(names, edges);
}

inline HolderComplex cycle(const std::vector<Rational>& betas) {
    std::vector<std::string> names;
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < betas.size(); ++i) names.push_back(vname(i));
    for (std::size_t i = 0; i < betas.size(); ++i)
        edges.push_back({"g" + std::to_string(i), names[i], names[(i + 1) % betas.size()], betas[i]});
    return HolderComplex(names, edges);
}

inline HolderComplex random_cycle(Rng& rng, int max_len = 8, int max_den = 2) {
    std::vector<Rational> betas;
    int len = uniform(rng, 2, max_len);
    for (int i = 0; i < len; ++i) betas.push_back(random_beta(rng, max_den));
    return cycle(betas);
}

/// Same complex with vertex names permuted, edges shuffled and renamed.
inline HolderComplex relabel(const HolderComplex& c, Rng& rng) {
    std::vector<std::size_t> perm(c.vertex_count());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> names(c.vertex_count());
    for (std::size_t i = 0; i < perm.size(); ++i) names[i] = "w" + std::to_string(perm[i]);
    auto specs = c.edge_specs();
    std::shuffle(specs.begin(), specs.end(), rng);
    std::vector<EdgeSpec> out;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        auto a = names[c.vertex_index(specs[k].a)];
        auto b = names[c.vertex_index(specs[k].b)];
        if (uniform(rng, 0, 1)) std::swap(a, b);
        out.push_back({"h" + std::to_string(k), a, b, specs[k].beta});
    }
    std::vector<std::string> order = names;
    std::shuffle(order.begin(), order.end(), rng);
    return HolderComplex(order, out);
}

/// Coordinate-parameterized planar-or-spatial arc (t, ...) built from a
/// small exponent pool so that random pairs share long prefixes.
inline Arc random_arc(Rng& rng, std::size_t dim = 3) {
    static const std::vector<Rational> pool{1, Rational(5, 4), Rational(3, 2), 2, Rational(5, 2), 3};
    std::vector<Series> coords{Series::monomial(1, 1)};
    for (std::size_t i = 1; i < dim; ++i) {
        std::vector<Term> terms;
        for (const auto& e : pool)
            if (uniform(rng, 0, 2) == 0) terms.push_back({e, Rational(uniform(rng, -2, 2))});
        coords.push_back(Series::from_terms(terms));
    }
    return Arc(coords, Parameterization::coordinate, 0);
}

/// Copy of g whose coefficients at exponents >= from are re-randomized.
inline Arc perturb_arc(const Arc& g, const Rational& from, Rng& rng) {
    static const std::vector<Rational> pool{1, Rational(5, 4), Rational(3, 2), 2, Rational(5, 2), 3};
    std::vector<Series> coords;
    for (std::size_t i = 0; i < g.dim(); ++i) {
        if (g.axis() && *g.axis() == i) {
            coords.push_back(g.coords()[i]);
            continue;
        }
        std::vector<Term> terms;
        for (const auto& t : g.coords()[i].terms())
            if (t.exp < from) terms.push_back(t);
        for (const auto& e : pool)
            if (e >= from && uniform(rng, 0, 2) == 0) terms.push_back({e, Rational(uniform(rng, -2, 2))});
        coords.push_back(Series::from_terms(terms));
    }
    return Arc(coords, g.param(), g.axis());
}

/// Linear factor w - r u^s, with the arc r u^s inside T_beta about half the time.
inline Expr random_linear(Rng& rng, const Rational& beta) {
    Rational s = beta + Rational(uniform(rng, 0, 4), 2);
    Rational r = s == beta ? Rational(uniform(rng, 1, 3), 4) : Rational(uniform(rng, -2, 3), uniform(rng, 1, 2));
    return Expr::w() - Expr::mono(r, s, 0);
}

inline Expr random_monomial(Rng& rng) {
    return Expr::mono(Rational(uniform(rng, 1, 3), uniform(rng, 1, 2)), Rational(uniform(rng, 2, 8), 2), 0);
}

/// Non-negative admissible function on T_beta whose center arcs are all
/// finite rational expansions (every branch is linear in w or a product of
/// linear factors under a single abs).
inline Expr random_admissible(Rng& rng, const Rational& beta) {
    Expr l1 = random_linear(rng, beta), l2 = random_linear(rng, beta);
    Rational c(uniform(rng, 1, 3), uniform(rng, 1, 2));
    switch (uniform(rng, 0, 6)) {
    case 0: return Expr::mono(c, Rational(uniform(rng, 0, 4), 2), 0) * abs(l1);
    case 1: return abs(l1 * l2);
    case 2: return abs(l1) + random_monomial(rng);
    case 3: return min(abs(l1), random_monomial(rng));
    case 4: return max(abs(l1), random_monomial(rng));
    case 5: return abs(l1) + abs(l2);
    default: return min(abs(l1), abs(l2));
    }
}

/// Valid abstract pizza on T_1 with 1-4 slices.
inline AbstractPizza random_pizza(Rng& rng) {
    AbstractPizza p;
    p.triangle_beta = 1;
    auto random_q = [&]() -> Exponent {
        if (uniform(rng, 0, 4) == 0) return Exponent::infinity();
        return Exponent(Rational(uniform(rng, 2, 12), 2));
    };
    Exponent q = random_q();
    int n = uniform(rng, 1, 4);
    for (int i = 0; i < n; ++i) {
        if (uniform(rng, 0, 3) == 0) {
            Rational beta(uniform(rng, 2, 8), 2);
            p.slices.push_back(PizzaSlice::point(q, beta));
            continue;
        }
        Exponent next = random_q();
        while (next == q) next = random_q();
        Exponent lo = min(q, next);
        Rational a(1, uniform(rng, 1, 3));
        Rational beta = Rational(1) + (lo.value() - 1) * Rational(uniform(rng, 0, 4), 4);
        p.slices.push_back(PizzaSlice::affine(q, next, {a, beta - a * lo.value()}));
        q = next;
    }
    return p;
}

/// Splits every interval slice with a finite interior point into two.
inline AbstractPizza refine(const AbstractPizza& p) {
    AbstractPizza out;
    out.triangle_beta = p.triangle_beta;
    for (const auto& s : p.slices) {
        if (s.is_point()) {
            out.slices.push_back(s);
            continue;
        }
        Rational lo = s.q_min().value();
        Rational mid = s.q_max().is_infinite() ? Rational(lo + 1) : Rational((lo + s.q_max().value()) / 2);
        out.slices.push_back(PizzaSlice::affine(s.q_in, mid, s.mu));
        out.slices.push_back(PizzaSlice::affine(mid, s.q_out, s.mu));
    }
    return out;
}

}  // namespace lipgeo::fuzz
