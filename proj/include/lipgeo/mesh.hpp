#pragma once

// Sampled links and mesh graphs of germ models. Inner distances are shortest
// paths in a mesh over the annulus of scales [t/4, 4t] plus the origin.

#include "lipgeo/fit.hpp"
#include "lipgeo/model.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/dijkstra_shortest_paths.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace lipgeo {

struct SamplePlan {
    std::vector<double> levels = geometric_levels(-6, -18, 7);  ///< coarse to fine
    int resolution = 64;         ///< uniform s-samples per patch, breakpoints added
    int annulus_octaves = 2;     ///< inner mesh spans [t 2^-k, t 2^k]
    int steps_per_octave = 2;
    std::uint64_t seed = 0;
    double tol = 0.05;

    static SamplePlan with_levels(double log2_max, double log2_min, int count) {
        SamplePlan p;
        p.levels = geometric_levels(log2_max, log2_min, count);
        return p;
    }
};

/// A point of the model at a given scale: patch index and link parameter.
struct PointRef {
    std::size_t patch = 0;
    double s = 0;
    friend bool operator==(const PointRef&, const PointRef&) = default;
};

enum class DistanceMode { outer, inner, pancake };

inline std::string to_string(DistanceMode m) {
    switch (m) {
    case DistanceMode::outer: return "outer";
    case DistanceMode::inner: return "inner";
    case DistanceMode::pancake: return "pancake";
    }
    return "?";
}

inline double norm(const std::vector<double>& p) {
    double s = 0;
    for (double x : p) s += x * x;
    return std::sqrt(s);
}

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline constexpr double max_scale = 0.5;

inline void check_scale(double t) {
    if (!(t > 0) || t > max_scale) throw ModelError("scale t out of range (0, 1/2]");
}

inline std::vector<double> s_grid(const Patch& p, int resolution, const std::vector<double>& extra = {}) {
    std::set<double> s;
    if (p.is_arc()) {
        s.insert(0.0);
    } else {
        for (int i = 0; i <= resolution; ++i) s.insert(static_cast<double>(i) / resolution);
        for (double b : p.breakpoints()) s.insert(b);
    }
    for (double x : extra) s.insert(x);
    return {s.begin(), s.end()};
}

struct LinkChain {
    std::size_t patch = 0;
    std::vector<double> s;
    std::vector<std::vector<double>> points;
};

/// Link of M at scale t, one polyline per patch.
inline std::vector<LinkChain> sample_link(const GermModel& m, double t, const SamplePlan& plan) {
    check_scale(t);
    std::vector<LinkChain> out;
    for (std::size_t k = 0; k < m.patches.size(); ++k) {
        LinkChain c{k, s_grid(m.patches[k], plan.resolution), {}};
        for (double s : c.s) c.points.push_back(m.patches[k].point(t, s));
        out.push_back(std::move(c));
    }
    return out;
}

/// Classes of patch ends identified by gluings, i.e. the shared boundary arcs.
inline std::map<PatchEnd, std::size_t> boundary_arc_classes(const GermModel& m) {
    std::vector<PatchEnd> ends;
    for (std::size_t k = 0; k < m.patches.size(); ++k) ends.push_back({k, 0}), ends.push_back({k, 1});
    auto index = [](const PatchEnd& e) { return 2 * e.patch + static_cast<std::size_t>(e.end); };
    std::vector<std::size_t> parent(ends.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& g : m.gluings) parent[find(index(g.a))] = find(index(g.b));
    std::map<std::size_t, std::size_t> renumber;
    std::map<PatchEnd, std::size_t> out;
    for (const auto& e : ends) out[e] = renumber.emplace(find(index(e)), renumber.size()).first->second;
    return out;
}

struct LinkComponent {
    std::vector<std::vector<double>> points;
    bool closed = false;
};

/// Patch chains joined along gluings. A component is closed when every end
/// of its patches is glued to exactly one other end.
inline std::vector<LinkComponent> link_components(const GermModel& m, double t, const SamplePlan& plan) {
    auto chains = sample_link(m, t, plan);
    std::map<PatchEnd, std::vector<PatchEnd>> glued;
    for (const auto& g : m.gluings) glued[g.a].push_back(g.b), glued[g.b].push_back(g.a);
    std::vector<bool> used(m.patches.size(), false);
    std::vector<LinkComponent> out;
    for (std::size_t start = 0; start < m.patches.size(); ++start) {
        if (used[start]) continue;
        // Walk backwards to a free end (or all the way around a loop) first.
        PatchEnd cur{start, 0};
        std::set<std::size_t> seen{start};
        while (glued[cur].size() == 1 && !seen.count(glued[cur][0].patch)) {
            PatchEnd nb = glued[cur][0];
            cur = {nb.patch, 1 - nb.end};
            seen.insert(nb.patch);
        }
        LinkComponent comp;
        bool closed = true;
        PatchEnd in{cur.patch, cur.end};
        std::size_t first = cur.patch;
        while (true) {
            used[in.patch] = true;
            auto pts = chains[in.patch].points;
            if (in.end == 1) std::reverse(pts.begin(), pts.end());
            comp.points.insert(comp.points.end(), pts.begin(), pts.end());
            PatchEnd out_end{in.patch, 1 - in.end};
            if (glued[in].size() != 1 || glued[out_end].size() != 1) closed = false;
            if (glued[out_end].size() != 1) break;
            PatchEnd next = glued[out_end][0];
            if (next.patch == first) break;
            if (used[next.patch]) {
                closed = false;
                break;
            }
            in = next;
        }
        comp.closed = closed && !m.patches[first].is_arc();
        out.push_back(std::move(comp));
    }
    return out;
}

/// Weighted graph over sampled points. Multi-level meshes cover the annulus
/// of scales around t and include the origin; edges run along link chains,
/// between consecutive scales at equal s, and through gluings (length 0).
/// Only same-s edges join scales, so refining the s-grid never lengthens a
/// shortest path.
class LinkMesh {
public:
    LinkMesh(const GermModel& m, double t, const SamplePlan& plan, const std::vector<PointRef>& marks = {},
             bool single_level = false)
        : model_(&m) {
        check_scale(t);
        std::vector<std::vector<double>> extra(m.patches.size());
        for (const auto& r : marks) {
            if (r.patch >= m.patches.size()) throw ModelError("point refers to a missing patch");
            if (!m.patches[r.patch].is_arc()) extra[r.patch].push_back(r.s);
        }
        for (std::size_t k = 0; k < m.patches.size(); ++k) grids_.push_back(s_grid(m.patches[k], plan.resolution, extra[k]));
        const int span = single_level ? 0 : plan.annulus_octaves * plan.steps_per_octave;
        for (int j = -span; j <= span; ++j) scales_.push_back(t * std::exp2(static_cast<double>(j) / plan.steps_per_octave));
        for (double sc : scales_)
            if (sc > max_scale) throw ModelError("mesh annulus exceeds the model scale range");
        center_ = static_cast<std::size_t>(span);
        std::size_t per_level = 0;
        for (const auto& g : grids_) offsets_.push_back(per_level), per_level += g.size();
        per_level_ = per_level;
        std::size_t n = per_level * scales_.size() + (single_level ? 0 : 1);
        graph_ = Graph(n);
        points_.resize(n);
        for (std::size_t l = 0; l < scales_.size(); ++l)
            for (std::size_t k = 0; k < grids_.size(); ++k)
                for (std::size_t i = 0; i < grids_[k].size(); ++i)
                    points_[id(l, k, i)] = m.patches[k].point(scales_[l], grids_[k][i]);
        auto link = [&](std::size_t a, std::size_t b, double w) { boost::add_edge(a, b, w, graph_); };
        for (std::size_t l = 0; l < scales_.size(); ++l) {
            for (std::size_t k = 0; k < grids_.size(); ++k)
                for (std::size_t i = 0; i < grids_[k].size(); ++i) {
                    std::size_t a = id(l, k, i);
                    if (i + 1 < grids_[k].size()) link(a, id(l, k, i + 1), euclid(points_[a], points_[id(l, k, i + 1)]));
                    if (l + 1 < scales_.size()) link(a, id(l + 1, k, i), euclid(points_[a], points_[id(l + 1, k, i)]));
                }
            for (const auto& g : m.gluings) link(end_id(l, g.a), end_id(l, g.b), 0.0);
        }
        if (!single_level) {
            origin_ = n - 1;
            points_[*origin_] = std::vector<double>(m.dim, 0.0);
            for (std::size_t k = 0; k < grids_.size(); ++k)
                for (std::size_t i = 0; i < grids_[k].size(); ++i)
                    link(*origin_, id(0, k, i), norm(points_[id(0, k, i)]));
        }
    }

    std::size_t size() const { return points_.size(); }

    /// Node of a point at the central scale t.
    std::size_t node(const PointRef& r) const {
        const auto& g = grids_.at(r.patch);
        if (model_->patches[r.patch].is_arc()) return id(center_, r.patch, 0);
        auto it = std::lower_bound(g.begin(), g.end(), r.s - 1e-12);
        if (it == g.end() || std::abs(*it - r.s) > 1e-12) throw ModelError("point is not a mesh node");
        return id(center_, r.patch, static_cast<std::size_t>(it - g.begin()));
    }

    std::vector<double> distances_from(std::size_t source) const {
        std::vector<double> d(size());
        boost::dijkstra_shortest_paths(graph_, source, boost::distance_map(boost::make_iterator_property_map(
                                                           d.begin(), boost::get(boost::vertex_index, graph_))));
        return d;
    }

    double distance(const PointRef& a, const PointRef& b) const {
        double d = distances_from(node(a))[node(b)];
        if (!std::isfinite(d) || d >= std::numeric_limits<double>::max() / 2) throw ModelError("mesh is disconnected");
        return d;
    }

    /// Largest finite shortest-path distance between central-scale nodes.
    double diameter() const {
        double best = 0;
        for (std::size_t a = center_ * per_level_; a < (center_ + 1) * per_level_; ++a) {
            auto d = distances_from(a);
            for (std::size_t b = center_ * per_level_; b < (center_ + 1) * per_level_; ++b) {
                if (d[b] >= std::numeric_limits<double>::max() / 2) throw ModelError("link is disconnected");
                best = std::max(best, d[b]);
            }
        }
        return best;
    }

private:
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                                        boost::property<boost::edge_weight_t, double>>;

    std::size_t id(std::size_t level, std::size_t patch, std::size_t i) const {
        return level * per_level_ + offsets_[patch] + i;
    }
    std::size_t end_id(std::size_t level, const PatchEnd& e) const {
        return id(level, e.patch, e.end == 0 ? 0 : grids_[e.patch].size() - 1);
    }

    const GermModel* model_;
    std::vector<std::vector<double>> grids_;
    std::vector<double> scales_;
    std::vector<std::size_t> offsets_;
    std::size_t per_level_ = 0;
    std::size_t center_ = 0;
    std::optional<std::size_t> origin_;
    std::vector<std::vector<double>> points_;
    Graph graph_;
};

/// Partition of the patches into pancakes with claimed exponents.
struct PancakeDecomposition {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<Exponent> betas;
};

/// Group index per patch; throws unless the groups partition the patches
/// and any two groups share at most one boundary arc.
inline std::vector<std::size_t> pancake_membership(const GermModel& m, const PancakeDecomposition& d) {
    if (d.groups.size() != d.betas.size()) throw ModelError("each pancake needs a claimed exponent");
    std::vector<std::size_t> owner(m.patches.size(), SIZE_MAX);
    for (std::size_t g = 0; g < d.groups.size(); ++g) {
        if (d.groups[g].empty()) throw ModelError("empty pancake");
        for (auto k : d.groups[g]) {
            if (k >= m.patches.size()) throw ModelError("pancake refers to a missing patch");
            if (owner[k] != SIZE_MAX) throw ModelError("pancakes overlap: patch " + std::to_string(k) + " is in two groups");
            owner[k] = g;
        }
    }
    for (std::size_t k = 0; k < owner.size(); ++k)
        if (owner[k] == SIZE_MAX) throw ModelError("pancakes do not cover patch " + std::to_string(k));
    std::map<std::size_t, std::set<std::size_t>> arc_groups;
    for (const auto& [end, cls] : boundary_arc_classes(m)) arc_groups[cls].insert(owner[end.patch]);
    std::map<std::pair<std::size_t, std::size_t>, int> shared;
    for (const auto& [cls, gs] : arc_groups)
        for (auto a : gs)
            for (auto b : gs)
                if (a < b && ++shared[{a, b}] > 1)
                    throw ModelError("pancakes " + std::to_string(a) + " and " + std::to_string(b) +
                                     " share more than one boundary arc");
    return owner;
}

/// Shortest chain of straight legs, each inside one pancake, through shared
/// boundary arcs and the origin at the annulus scales.
inline double pancake_distance(const GermModel& m, const PancakeDecomposition& d, const PointRef& a, const PointRef& b,
                               double t, const SamplePlan& plan) {
    check_scale(t);
    auto owner = pancake_membership(m, d);
    struct Node {
        std::vector<double> p;
        std::set<std::size_t> groups;
    };
    std::vector<Node> nodes{{m.patches[a.patch].point(t, a.s), {owner[a.patch]}},
                            {m.patches[b.patch].point(t, b.s), {owner[b.patch]}}};
    std::set<std::size_t> all;
    for (std::size_t g = 0; g < d.groups.size(); ++g) all.insert(g);
    nodes.push_back({std::vector<double>(m.dim, 0.0), all});
    std::map<std::size_t, std::pair<PatchEnd, std::set<std::size_t>>> arcs;
    for (const auto& [end, cls] : boundary_arc_classes(m)) {
        auto& entry = arcs.emplace(cls, std::pair{end, std::set<std::size_t>{}}).first->second;
        entry.second.insert(owner[end.patch]);
    }
    const int span = plan.annulus_octaves * plan.steps_per_octave;
    for (int j = -span; j <= span; ++j) {
        double sc = t * std::exp2(static_cast<double>(j) / plan.steps_per_octave);
        if (sc > max_scale) continue;
        for (const auto& [cls, entry] : arcs)
            nodes.push_back({m.patches[entry.first.patch].point(sc, entry.first.end), entry.second});
    }
    const std::size_t n = nodes.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<bool> done(n, false);
    dist[0] = 0;
    auto share = [&](const Node& x, const Node& y) {
        for (auto g : x.groups)
            if (y.groups.count(g)) return true;
        return false;
    };
    // Dense graph, so the quadratic form of Dijkstra is the natural one.
    for (std::size_t it = 0; it < n; ++it) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!done[v] && (u == n || dist[v] < dist[u])) u = v;
        if (u == n || !std::isfinite(dist[u])) break;
        done[u] = true;
        for (std::size_t v = 0; v < n; ++v)
            if (!done[v] && share(nodes[u], nodes[v])) dist[v] = std::min(dist[v], dist[u] + euclid(nodes[u].p, nodes[v].p));
    }
    if (!std::isfinite(dist[1])) throw ModelError("no pancake chain joins the points");
    return dist[1];
}

inline double distance(const GermModel& m, const PointRef& a, const PointRef& b, DistanceMode mode, double t,
                       const SamplePlan& plan, const PancakeDecomposition* d = nullptr) {
    check_scale(t);
    switch (mode) {
    case DistanceMode::outer: return euclid(m.patches.at(a.patch).point(t, a.s), m.patches.at(b.patch).point(t, b.s));
    case DistanceMode::inner: return LinkMesh(m, t, plan, {a, b}).distance(a, b);
    case DistanceMode::pancake:
        if (!d) throw ModelError("pancake distance needs a decomposition");
        return pancake_distance(m, *d, a, b, t, plan);
    }
    return 0;
}

/// Patch and parameter of a symbolic arc lying on the model, checked at two
/// scales to relative accuracy 1e-6.
inline PointRef locate(const GermModel& m, const Arc& g, const SamplePlan& plan) {
    if (g.dim() != m.dim) throw ModelError("arc dimension differs from the model");
    const double t0 = plan.levels.front(), t1 = plan.levels.back();
    auto off = [&](const PointRef& r, double t) { return euclid(m.patches[r.patch].point(t, r.s), g.evaluate(t)) / norm(g.evaluate(t)); };
    std::optional<PointRef> best;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m.patches.size(); ++k) {
        auto grid = s_grid(m.patches[k], 4 * plan.resolution);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            // Golden-section search on each grid cell; the distance is convex on linear pieces.
            double lo = grid[i], hi = i + 1 < grid.size() ? grid[i + 1] : grid[i];
            for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
                double m1 = lo + (hi - lo) * 0.381966, m2 = hi - (hi - lo) * 0.381966;
                if (off({k, m1}, t0) < off({k, m2}, t0)) hi = m2;
                else lo = m1;
            }
            for (double s : {grid[i], 0.5 * (lo + hi)}) {
                double e = off({k, s}, t0);
                if (e < best_err) best_err = e, best = PointRef{k, s};
            }
        }
    }
    if (!best || best_err > 1e-6 || off(*best, t1) > 1e-6) throw ModelError("arc does not lie on the model");
    return *best;
}

}  // namespace lipgeo
