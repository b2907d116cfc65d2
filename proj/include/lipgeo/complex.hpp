#pragma once

#include "lipgeo/exponent.hpp"
#include "lipgeo/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lipgeo {

class ComplexError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EdgeSpec {
    std::string id;
    std::string a;
    std::string b;
    Rational beta;
};

struct HolderEdge {
    std::string id;
    std::size_t a;
    std::size_t b;
    Rational beta;

    std::size_t other(std::size_t v) const { return v == a ? b : a; }
};

/// Finite multigraph with a rational exponent >= 1 on every edge.
/// No self-loops, no isolated vertices; parallel edges are allowed.
class HolderComplex {
public:
    HolderComplex() = default;

    HolderComplex(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges)
        : vertices_(std::move(vertices)) {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (!index_.emplace(vertices_[i], i).second) throw ComplexError("duplicate vertex '" + vertices_[i] + "'");
        std::set<std::string> ids;
        for (const auto& e : edges) {
            if (!ids.insert(e.id).second) throw ComplexError("duplicate edge id '" + e.id + "'");
            auto ia = index_.find(e.a);
            auto ib = index_.find(e.b);
            if (ia == index_.end() || ib == index_.end())
                throw ComplexError("edge '" + e.id + "' references an unknown vertex");
            if (ia->second == ib->second) throw ComplexError("edge '" + e.id + "' is a self-loop");
            if (e.beta < 1) throw ComplexError("edge '" + e.id + "' has beta " + to_string(e.beta) + " < 1");
            edges_.push_back({e.id, ia->second, ib->second, e.beta});
        }
        rebuild_incidence();
        for (std::size_t v = 0; v < vertices_.size(); ++v)
            if (incident_[v].empty()) throw ComplexError("isolated vertex '" + vertices_[v] + "'");
    }

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<HolderEdge>& edges() const { return edges_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    std::size_t vertex_index(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw ComplexError("unknown vertex '" + name + "'");
        return it->second;
    }

    const std::vector<std::size_t>& incident(std::size_t v) const { return incident_.at(v); }
    std::size_t degree(std::size_t v) const { return incident_.at(v).size(); }

    std::vector<EdgeSpec> edge_specs() const {
        std::vector<EdgeSpec> out;
        for (const auto& e : edges_) out.push_back({e.id, vertices_[e.a], vertices_[e.b], e.beta});
        return out;
    }

    /// Number of connected components.
    std::size_t component_count() const {
        std::vector<std::size_t> comp = components();
        std::set<std::size_t> s(comp.begin(), comp.end());
        return s.size();
    }

    /// Component label per vertex.
    std::vector<std::size_t> components() const {
        std::vector<std::size_t> parent(vertices_.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& e : edges_) parent[find(e.a)] = find(e.b);
        std::vector<std::size_t> out(vertices_.size());
        for (std::size_t v = 0; v < vertices_.size(); ++v) out[v] = find(v);
        return out;
    }

    /// First Betti number |E| - |V| + #components.
    std::size_t cycle_rank() const { return edges_.size() + component_count() - vertices_.size(); }

    friend bool operator==(const HolderComplex& x, const HolderComplex& y) {
        if (x.vertices_ != y.vertices_ || x.edges_.size() != y.edges_.size()) return false;
        for (std::size_t i = 0; i < x.edges_.size(); ++i) {
            const auto& a = x.edges_[i];
            const auto& b = y.edges_[i];
            if (a.id != b.id || a.a != b.a || a.b != b.b || a.beta != b.beta) return false;
        }
        return true;
    }

private:
    void rebuild_incidence() {
        incident_.assign(vertices_.size(), {});
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            incident_[edges_[i].a].push_back(i);
            incident_[edges_[i].b].push_back(i);
        }
    }

    std::vector<std::string> vertices_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<HolderEdge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
};

enum class VertexClass { non_critical, loop, critical };

inline std::string to_string(VertexClass c) {
    switch (c) {
    case VertexClass::non_critical: return "non-critical";
    case VertexClass::loop: return "loop";
    case VertexClass::critical: return "critical";
    }
    return "?";
}

namespace detail {

inline VertexClass classify(const std::vector<HolderEdge>& edges, const std::vector<std::size_t>& inc, std::size_t v) {
    if (inc.size() != 2) return VertexClass::critical;
    std::size_t x = edges[inc[0]].other(v);
    std::size_t y = edges[inc[1]].other(v);
    return x == y ? VertexClass::loop : VertexClass::non_critical;
}

}  // namespace detail

/// Two incident edges to two different vertices: non-critical; two incident
/// edges to the same vertex: loop; anything else is critical.
inline VertexClass classify_vertex(const HolderComplex& c, std::size_t v) {
    return detail::classify(c.edges(), c.incident(v), v);
}

inline VertexClass classify_vertex(const HolderComplex& c, const std::string& v) {
    return classify_vertex(c, c.vertex_index(v));
}

struct CanonicalizeOptions {
    /// When set, non-critical vertices are eliminated in a seeded random order.
    std::optional<std::uint64_t> shuffle_seed;
};

/// Simplification to the canonical complex: eliminate non-critical vertices
/// (the merged edge carries the min exponent) until none remain, then give
/// both edges at every loop vertex the min of their exponents.
inline HolderComplex canonicalize(const HolderComplex& c, const CanonicalizeOptions& opts = {}) {
    std::vector<HolderEdge> edges = c.edges();
    std::vector<bool> edge_alive(edges.size(), true);
    std::vector<bool> vertex_alive(c.vertex_count(), true);
    std::vector<std::vector<std::size_t>> inc(c.vertex_count());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        inc[edges[i].a].push_back(i);
        inc[edges[i].b].push_back(i);
    }
    std::optional<std::mt19937_64> rng;
    if (opts.shuffle_seed) rng.emplace(*opts.shuffle_seed);

    auto drop = [](std::vector<std::size_t>& list, std::size_t e) { list.erase(std::find(list.begin(), list.end(), e)); };

    while (true) {
        std::vector<std::size_t> pivots;
        for (std::size_t v = 0; v < inc.size(); ++v)
            if (vertex_alive[v] && detail::classify(edges, inc[v], v) == VertexClass::non_critical) pivots.push_back(v);
        if (pivots.empty()) break;
        std::size_t v0 = pivots.front();
        if (rng) v0 = pivots[std::uniform_int_distribution<std::size_t>(0, pivots.size() - 1)(*rng)];

        std::size_t g1 = inc[v0][0], g2 = inc[v0][1];
        if (g2 < g1) std::swap(g1, g2);
        std::size_t v1 = edges[g1].other(v0), v2 = edges[g2].other(v0);
        // g1 survives as the merged edge v1 - v2.
        const HolderEdge& keep = edges[g2].beta < edges[g1].beta ? edges[g2] : edges[g1];
        std::string id = keep.id;
        Rational beta = std::min(edges[g1].beta, edges[g2].beta);
        drop(inc[v2], g2);
        edge_alive[g2] = false;
        vertex_alive[v0] = false;
        inc[v0].clear();
        edges[g1] = {std::move(id), v1, v2, std::move(beta)};
        inc[v2].push_back(g1);
    }

    for (std::size_t v = 0; v < inc.size(); ++v) {
        if (!vertex_alive[v] || detail::classify(edges, inc[v], v) != VertexClass::loop) continue;
        Rational m = std::min(edges[inc[v][0]].beta, edges[inc[v][1]].beta);
        edges[inc[v][0]].beta = m;
        edges[inc[v][1]].beta = m;
    }

    std::vector<std::string> names;
    for (std::size_t v = 0; v < inc.size(); ++v)
        if (vertex_alive[v]) names.push_back(c.vertices()[v]);
    std::vector<EdgeSpec> specs;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edge_alive[i]) specs.push_back({edges[i].id, c.vertices()[edges[i].a], c.vertices()[edges[i].b], edges[i].beta});
    return HolderComplex(std::move(names), specs);
}

struct CanonicalCheck {
    bool canonical = true;
    std::vector<std::string> violations;
};

inline CanonicalCheck is_canonical(const HolderComplex& c) {
    CanonicalCheck out;
    for (std::size_t v = 0; v < c.vertex_count(); ++v) {
        auto cls = classify_vertex(c, v);
        if (cls == VertexClass::non_critical) {
            out.violations.push_back("non-critical vertex '" + c.vertices()[v] + "'");
        } else if (cls == VertexClass::loop) {
            const auto& e1 = c.edges()[c.incident(v)[0]];
            const auto& e2 = c.edges()[c.incident(v)[1]];
            if (e1.beta != e2.beta)
                out.violations.push_back("loop vertex '" + c.vertices()[v] + "' has unequal exponents on '" + e1.id +
                                         "' (" + to_string(e1.beta) + ") and '" + e2.id + "' (" + to_string(e2.beta) + ")");
        }
    }
    out.canonical = out.violations.empty();
    return out;
}

struct Isomorphism {
    std::map<std::string, std::string> vertices;
    std::map<std::string, std::string> edges;
};

namespace detail {

// Color refinement over the disjoint union of two complexes so that colors
// are comparable between them.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine_colors(const HolderComplex& x,
                                                                                     const HolderComplex& y) {
    using Signature = std::vector<std::string>;
    auto initial = [](const HolderComplex& c, std::size_t v) {
        std::vector<Rational> betas;
        for (auto e : c.incident(v)) betas.push_back(c.edges()[e].beta);
        std::sort(betas.begin(), betas.end());
        std::string s = std::to_string(betas.size());
        for (const auto& b : betas) s += "," + to_string(b);
        return s;
    };
    std::map<std::string, std::size_t> palette;
    auto intern = [&](const std::string& s) { return palette.emplace(s, palette.size()).first->second; };
    std::vector<std::size_t> cx(x.vertex_count()), cy(y.vertex_count());
    for (std::size_t v = 0; v < cx.size(); ++v) cx[v] = intern(initial(x, v));
    for (std::size_t v = 0; v < cy.size(); ++v) cy[v] = intern(initial(y, v));

    auto count = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        std::set<std::size_t> s(a.begin(), a.end());
        s.insert(b.begin(), b.end());
        return s.size();
    };
    std::size_t classes = count(cx, cy);
    for (std::size_t round = 0; round < x.vertex_count() + y.vertex_count(); ++round) {
        palette.clear();
        auto next = [&](const HolderComplex& c, const std::vector<std::size_t>& col, std::size_t v) {
            Signature sig;
            for (auto e : c.incident(v))
                sig.push_back(std::to_string(col[c.edges()[e].other(v)]) + ":" + to_string(c.edges()[e].beta));
            std::sort(sig.begin(), sig.end());
            std::string s = std::to_string(col[v]);
            for (const auto& p : sig) s += "|" + p;
            return s;
        };
        std::vector<std::size_t> nx(cx.size()), ny(cy.size());
        for (std::size_t v = 0; v < cx.size(); ++v) nx[v] = intern(next(x, cx, v));
        for (std::size_t v = 0; v < cy.size(); ++v) ny[v] = intern(next(y, cy, v));
        std::size_t k = count(nx, ny);
        cx = std::move(nx);
        cy = std::move(ny);
        if (k == classes) break;
        classes = k;
    }
    return {cx, cy};
}

// Sorted exponents of the edges joining u and v.
inline std::vector<Rational> bundle(const HolderComplex& c, std::size_t u, std::size_t v) {
    std::vector<Rational> out;
    for (auto e : c.incident(u))
        if (c.edges()[e].other(u) == v) out.push_back(c.edges()[e].beta);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Labeled multigraph isomorphism by backtracking with color-refinement
/// pruning. Deterministic: candidates are tried in vertex index order.
inline std::optional<Isomorphism> find_isomorphism(const HolderComplex& x, const HolderComplex& y) {
    if (x.vertex_count() != y.vertex_count() || x.edge_count() != y.edge_count()) return std::nullopt;
    auto betas = [](const HolderComplex& c) {
        std::vector<Rational> b;
        for (const auto& e : c.edges()) b.push_back(e.beta);
        std::sort(b.begin(), b.end());
        return b;
    };
    if (betas(x) != betas(y)) return std::nullopt;
    auto [cx, cy] = detail::refine_colors(x, y);
    {
        auto sx = cx, sy = cy;
        std::sort(sx.begin(), sx.end());
        std::sort(sy.begin(), sy.end());
        if (sx != sy) return std::nullopt;
    }
    const std::size_t n = x.vertex_count();
    // Visit order: BFS from rarest colors so that each new vertex has mapped neighbours.
    std::vector<std::size_t> order;
    {
        std::map<std::size_t, std::size_t> freq;
        for (auto c : cx) ++freq[c];
        std::vector<std::size_t> seeds(n);
        std::iota(seeds.begin(), seeds.end(), 0);
        std::stable_sort(seeds.begin(), seeds.end(), [&](auto a, auto b) { return freq[cx[a]] < freq[cx[b]]; });
        std::vector<bool> seen(n, false);
        for (auto s : seeds) {
            if (seen[s]) continue;
            std::vector<std::size_t> queue{s};
            seen[s] = true;
            for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                std::size_t v = queue[qi];
                order.push_back(v);
                std::vector<std::size_t> nbrs;
                for (auto e : x.incident(v)) nbrs.push_back(x.edges()[e].other(v));
                std::sort(nbrs.begin(), nbrs.end());
                for (auto w : nbrs)
                    if (!seen[w]) {
                        seen[w] = true;
                        queue.push_back(w);
                    }
            }
        }
    }
    std::vector<std::optional<std::size_t>> map(n);
    std::vector<bool> used(n, false);

    auto consistent = [&](std::size_t v, std::size_t img) {
        for (auto e : x.incident(v)) {
            std::size_t w = x.edges()[e].other(v);
            if (map[w] && detail::bundle(x, v, w) != detail::bundle(y, img, *map[w])) return false;
        }
        for (auto e : y.incident(img)) {
            std::size_t w = y.edges()[e].other(img);
            if (!used[w]) continue;
            // w is the image of some mapped vertex; that vertex must be adjacent to v the same way.
            for (std::size_t u = 0; u < n; ++u)
                if (map[u] == w && detail::bundle(x, v, u) != detail::bundle(y, img, w)) return false;
        }
        return true;
    };

    auto search = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == n) return true;
        std::size_t v = order[depth];
        for (std::size_t img = 0; img < n; ++img) {
            if (used[img] || cy[img] != cx[v] || !consistent(v, img)) continue;
            map[v] = img;
            used[img] = true;
            if (self(self, depth + 1)) return true;
            map[v].reset();
            used[img] = false;
        }
        return false;
    };
    if (!search(search, 0)) return std::nullopt;

    Isomorphism iso;
    for (std::size_t v = 0; v < n; ++v) iso.vertices[x.vertices()[v]] = y.vertices()[*map[v]];
    // Match parallel edges by exponent, then by position.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> ybund;
    for (std::size_t i = 0; i < y.edge_count(); ++i) {
        auto [a, b] = std::minmax(y.edges()[i].a, y.edges()[i].b);
        ybund[{a, b}].push_back(i);
    }
    for (auto& [k, list] : ybund)
        std::stable_sort(list.begin(), list.end(), [&](auto p, auto q) { return y.edges()[p].beta < y.edges()[q].beta; });
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> xbund;
    for (std::size_t i = 0; i < x.edge_count(); ++i) {
        auto [a, b] = std::minmax(*map[x.edges()[i].a], *map[x.edges()[i].b]);
        xbund[{a, b}].push_back(i);
    }
    for (auto& [k, list] : xbund) {
        std::stable_sort(list.begin(), list.end(), [&](auto p, auto q) { return x.edges()[p].beta < x.edges()[q].beta; });
        const auto& targets = ybund.at(k);
        for (std::size_t i = 0; i < list.size(); ++i) iso.edges[x.edges()[list[i]].id] = y.edges()[targets[i]].id;
    }
    return iso;
}

struct InnerEquivalence {
    bool equivalent = false;
    std::optional<Isomorphism> witness;  ///< between the canonical forms
    HolderComplex canonical_first;
    HolderComplex canonical_second;
};

/// Inner Lipschitz equivalence: canonical forms isomorphic with equal labels.
inline InnerEquivalence equivalent(const HolderComplex& a, const HolderComplex& b) {
    InnerEquivalence out;
    out.canonical_first = canonicalize(a);
    out.canonical_second = canonicalize(b);
    out.witness = find_isomorphism(out.canonical_first, out.canonical_second);
    out.equivalent = out.witness.has_value();
    return out;
}

/// Exponent of the horn inner-equivalent to a germ whose complex is a single
/// cycle: the smallest edge exponent.
inline Exponent horn_exponent(const HolderComplex& c) {
    if (c.vertex_count() < 2 || c.component_count() != 1) throw ComplexError("horn_exponent: complex is not a single cycle");
    for (std::size_t v = 0; v < c.vertex_count(); ++v)
        if (c.degree(v) != 2) throw ComplexError("horn_exponent: vertex '" + c.vertices()[v] + "' does not have degree 2");
    Rational m = c.edges().front().beta;
    for (const auto& e : c.edges()) m = std::min(m, e.beta);
    return Exponent(m);
}

}  // namespace lipgeo
