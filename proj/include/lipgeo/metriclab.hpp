#pragma once

// Numerical experiments on germ models: tangency exponents, LNE and pancake
// checks, generic projections, tangent cones and horn exponents.

#include "lipgeo/arc.hpp"
#include "lipgeo/mesh.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace lipgeo {

/// Fitted exponent of a distance across the plan's scales. `infinite` when
/// every sample is zero (the points coincide), i.e. the exponent exceeds any bound.
struct TangencyEstimate {
    bool infinite = false;
    OrderEstimate fit;
    std::vector<std::pair<double, double>> samples;  ///< (t, distance)

    double exponent() const { return infinite ? std::numeric_limits<double>::infinity() : fit.exponent; }
};

inline TangencyEstimate fit_samples(std::vector<std::pair<double, double>> samples) {
    TangencyEstimate e;
    e.samples = samples;
    std::vector<std::pair<double, double>> positive;
    for (const auto& s : samples)
        if (s.second > 0) positive.push_back(s);
    if (positive.empty()) {
        e.infinite = true;
        return e;
    }
    if (positive.size() < samples.size()) throw ModelError("distance vanishes at some scales only");
    e.fit = estimate_order(positive);
    return e;
}

inline TangencyEstimate tangency_numeric(const GermModel& m, const PointRef& a, const PointRef& b, DistanceMode mode,
                                         const SamplePlan& plan) {
    std::vector<std::pair<double, double>> samples;
    for (double t : plan.levels) samples.emplace_back(t, distance(m, a, b, mode, t, plan));
    return fit_samples(std::move(samples));
}

inline TangencyEstimate tangency_numeric(const GermModel& m, const Arc& g1, const Arc& g2, DistanceMode mode,
                                         const SamplePlan& plan) {
    return tangency_numeric(m, locate(m, g1, plan), locate(m, g2, plan), mode, plan);
}

struct PairwiseOrders {
    std::vector<std::vector<TangencyEstimate>> outer, inner;
};

/// Outer and inner tangency estimates for all pairs, one mesh per scale.
inline PairwiseOrders pairwise_orders(const GermModel& m, const std::vector<PointRef>& refs, const SamplePlan& plan) {
    const std::size_t n = refs.size();
    std::vector<std::vector<std::vector<std::pair<double, double>>>> so(n, std::vector<std::vector<std::pair<double, double>>>(n)),
        si = so;
    for (double t : plan.levels) {
        LinkMesh mesh(m, t, plan, refs);
        std::vector<std::size_t> nodes;
        for (const auto& r : refs) nodes.push_back(mesh.node(r));
        for (std::size_t i = 0; i < n; ++i) {
            auto d = mesh.distances_from(nodes[i]);
            for (std::size_t j = i + 1; j < n; ++j) {
                if (d[nodes[j]] >= std::numeric_limits<double>::max() / 2) throw ModelError("mesh is disconnected");
                si[i][j].emplace_back(t, d[nodes[j]]);
                so[i][j].emplace_back(t, distance(m, refs[i], refs[j], DistanceMode::outer, t, plan));
            }
        }
    }
    PairwiseOrders out;
    out.outer.assign(n, std::vector<TangencyEstimate>(n));
    out.inner = out.outer;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            out.outer[i][j] = fit_samples(so[i][j]);
            out.inner[i][j] = fit_samples(si[i][j]);
        }
    return out;
}

enum class LneMode { full, weak };

inline std::string to_string(LneMode m) { return m == LneMode::full ? "full" : "weak"; }

struct PairReport {
    std::size_t i = 0, j = 0;
    TangencyEstimate outer, inner;
    bool violation = false;
};

struct LneReport {
    LneMode mode = LneMode::full;
    std::optional<Exponent> beta;
    double tol = 0.05;
    std::vector<PointRef> arcs;
    std::vector<PairReport> pairs;

    std::vector<PairReport> violations() const {
        std::vector<PairReport> v;
        for (const auto& p : pairs)
            if (p.violation) v.push_back(p);
        return v;
    }
    bool passes() const { return violations().empty(); }
};

/// Full mode flags pairs whose outer exponent exceeds the inner one by more
/// than tol. Weak mode flags them only when the inner exponent is also more
/// than tol away from beta.
inline LneReport lne_report(const GermModel& m, const std::vector<PointRef>& arcs, LneMode mode,
                            std::optional<Exponent> beta, const SamplePlan& plan) {
    if (arcs.size() < 2) throw ModelError("LNE check needs at least two arcs");
    if (mode == LneMode::weak && !beta) throw ModelError("weak LNE check needs beta");
    LneReport r{mode, beta, plan.tol, arcs, {}};
    auto orders = pairwise_orders(m, arcs, plan);
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j) {
            PairReport p{i, j, orders.outer[i][j], orders.inner[i][j], false};
            if (!p.outer.infinite) {
                bool differ = p.outer.exponent() - p.inner.exponent() > plan.tol;
                if (mode == LneMode::full) p.violation = differ;
                else {
                    double b = beta->is_infinite() ? std::numeric_limits<double>::infinity() : to_double(beta->value());
                    p.violation = differ && std::abs(p.inner.exponent() - b) > plan.tol;
                }
            }
            r.pairs.push_back(std::move(p));
        }
    return r;
}

/// Arcs at s = j/per_patch on every patch (s = 0 only on arc patches).
inline std::vector<PointRef> sample_arcs(const GermModel& m, int per_patch) {
    std::vector<PointRef> out;
    for (std::size_t k = 0; k < m.patches.size(); ++k) {
        if (m.patches[k].is_arc()) {
            out.push_back({k, 0.0});
            continue;
        }
        for (int j = 0; j <= per_patch; ++j) out.push_back({k, static_cast<double>(j) / per_patch});
    }
    return out;
}

/// Patches `keep` of m with the gluings among them, renumbered.
inline GermModel submodel(const GermModel& m, const std::vector<std::size_t>& keep) {
    GermModel out;
    out.dim = m.dim;
    out.axis = m.axis;
    out.name = m.name;
    std::map<std::size_t, std::size_t> index;
    for (auto k : keep) {
        index[k] = out.patches.size();
        out.patches.push_back(m.patches.at(k));
    }
    for (const auto& g : m.gluings)
        if (index.count(g.a.patch) && index.count(g.b.patch))
            out.gluings.push_back({{index[g.a.patch], g.a.end}, {index[g.b.patch], g.b.end}});
    return out;
}

/// Inner link diameter at each scale, fitted against t.
inline TangencyEstimate link_diameter_order(const GermModel& m, const SamplePlan& plan) {
    std::vector<std::pair<double, double>> samples;
    for (double t : plan.levels) samples.emplace_back(t, LinkMesh(m, t, plan, {}, true).diameter());
    return fit_samples(std::move(samples));
}

struct PancakeEntry {
    std::vector<std::size_t> patches;
    Exponent claimed;
    TangencyEstimate beta_estimate;
    bool lne = true;
    bool beta_matches = true;
};

struct AdjacentPair {
    std::size_t a = 0, b = 0;
    bool union_lne = false;
};

struct PancakeReport {
    std::vector<PancakeEntry> pancakes;
    std::vector<AdjacentPair> adjacent;
    bool valid = true;
    bool minimal = true;
    int resolution = 0;
    std::vector<std::string> findings;

    std::string verdict() const {
        if (!valid) return "invalid";
        return minimal ? "valid and minimal" : "valid but NOT minimal";
    }
};

/// Each pancake must be LNE with the claimed exponent; the decomposition is
/// minimal when no two adjacent pancakes form an LNE union. Pancakes are
/// adjacent when they share a boundary arc; in a model without gluings
/// (a curve germ) all pieces meet only at the origin and every pair counts.
inline PancakeReport pancake_check(const GermModel& m, const PancakeDecomposition& d, const SamplePlan& plan,
                                   int arcs_per_patch = 2) {
    auto owner = pancake_membership(m, d);
    PancakeReport r;
    r.resolution = plan.resolution;
    auto arcs_of = [&](const GermModel& sub) { return sample_arcs(sub, arcs_per_patch); };
    for (std::size_t g = 0; g < d.groups.size(); ++g) {
        PancakeEntry e{d.groups[g], d.betas[g], {}, true, true};
        GermModel sub = submodel(m, d.groups[g]);
        auto arcs = arcs_of(sub);
        if (arcs.size() >= 2) e.lne = lne_report(sub, arcs, LneMode::full, std::nullopt, plan).passes();
        e.beta_estimate = link_diameter_order(sub, plan);
        if (e.beta_estimate.infinite) e.beta_matches = e.claimed.is_infinite();
        else e.beta_matches = e.claimed.is_finite() && std::abs(e.beta_estimate.exponent() - to_double(e.claimed.value())) <= plan.tol;
        std::string tag = "pancake " + std::to_string(g) + ": ";
        if (!e.lne) r.findings.push_back(tag + "not LNE"), r.valid = false;
        if (!e.beta_matches)
            r.findings.push_back(tag + "claimed exponent " + e.claimed.str() + " but link diameter order is " +
                                 (e.beta_estimate.infinite ? std::string("inf") : std::to_string(e.beta_estimate.exponent()))),
                r.valid = false;
        r.pancakes.push_back(std::move(e));
    }
    std::set<std::pair<std::size_t, std::size_t>> adjacent;
    for (const auto& gl : m.gluings) {
        auto a = owner[gl.a.patch], b = owner[gl.b.patch];
        if (a != b) adjacent.insert({std::min(a, b), std::max(a, b)});
    }
    if (m.gluings.empty())
        for (std::size_t a = 0; a < d.groups.size(); ++a)
            for (std::size_t b = a + 1; b < d.groups.size(); ++b) adjacent.insert({a, b});
    for (const auto& [a, b] : adjacent) {
        std::vector<std::size_t> both = d.groups[a];
        both.insert(both.end(), d.groups[b].begin(), d.groups[b].end());
        GermModel sub = submodel(m, both);
        AdjacentPair p{a, b, lne_report(sub, arcs_of(sub), LneMode::full, std::nullopt, plan).passes()};
        if (p.union_lne) {
            r.minimal = false;
            r.findings.push_back("union of pancakes " + std::to_string(a) + " and " + std::to_string(b) + " is LNE");
        }
        r.adjacent.push_back(p);
    }
    if (r.minimal && r.valid)
        r.findings.push_back("no LNE union found at resolution " + std::to_string(plan.resolution));
    return r;
}

/// Orthonormal pair spanning a 2-plane.
struct Plane {
    std::vector<double> e1, e2;

    std::vector<double> project(const std::vector<double>& p) const {
        double a = 0, b = 0;
        for (std::size_t i = 0; i < p.size(); ++i) a += p[i] * e1[i], b += p[i] * e2[i];
        return {a, b};
    }
};

/// Gram-Schmidt on two Gaussian vectors: uniform on the Grassmannian.
inline Plane random_plane(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::vector<double> a(dim), b(dim);
    for (auto& x : a) x = gauss(rng);
    for (auto& x : b) x = gauss(rng);
    double na = norm(a);
    for (auto& x : a) x /= na;
    double dot = 0;
    for (std::size_t i = 0; i < dim; ++i) dot += a[i] * b[i];
    for (std::size_t i = 0; i < dim; ++i) b[i] -= dot * a[i];
    double nb = norm(b);
    for (auto& x : b) x /= nb;
    return {a, b};
}

/// t with |pi(gamma(t))| = r, by bisection in log t.
inline double reparameterize(const Patch& p, double s, const Plane& pl, double r) {
    double lo = -200, hi = 0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (norm(pl.project(p.point(std::exp2(mid), s))) < r) lo = mid;
        else hi = mid;
    }
    return std::exp2(0.5 * (lo + hi));
}

/// Smallest tangency exponent among projected arc pairs, with the projected
/// arcs parameterized by distance to the origin at the plan's scales.
inline double projected_min_tord(const GermModel& m, const std::vector<PointRef>& arcs, const Plane& pl, const SamplePlan& plan) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::vector<double>>> pts(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (double r : plan.levels) {
            const Patch& p = m.patches[arcs[i].patch];
            pts[i].push_back(pl.project(p.point(reparameterize(p, arcs[i].s, pl, r), arcs[i].s)));
        }
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j) {
            // Projected arcs can cross at coarse scales; the exponent is a
            // t -> 0 limit, so only the finer half of the scales is fitted.
            std::vector<std::pair<double, double>> samples;
            const std::size_t n = plan.levels.size(), from = n - std::min(n, std::max<std::size_t>(4, n / 2 + 1));
            for (std::size_t l = from; l < n; ++l) samples.emplace_back(plan.levels[l], euclid(pts[i][l], pts[j][l]));
            auto e = fit_samples(samples);
            if (!e.infinite) best = std::min(best, e.exponent());
        }
    return best;
}

struct ProjectionReport {
    std::uint64_t seed = 0;
    Exponent beta;
    double tol = 0.05;
    std::vector<double> estimates;  ///< one per plane
    std::size_t within = 0;

    double fraction_within() const { return estimates.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(estimates.size()); }
};

inline ProjectionReport projection_experiment(const GermModel& m, const Exponent& beta, int num_planes,
                                              std::uint64_t seed, const SamplePlan& plan, int arcs_per_patch = 4) {
    if (m.dim < 3) throw ModelError("projection experiment needs ambient dimension >= 3");
    ProjectionReport r{seed, beta, plan.tol, {}, 0};
    std::vector<PointRef> arcs;
    for (const auto& a : sample_arcs(m, arcs_per_patch))
        if (a.s < 1.0 || m.patches[a.patch].is_arc()) arcs.push_back(a);
    std::mt19937_64 rng(seed);
    const double b = to_double(beta.value());
    for (int k = 0; k < num_planes; ++k) {
        double e = projected_min_tord(m, arcs, random_plane(m.dim, rng), plan);
        r.estimates.push_back(e);
        if (std::abs(e - b) <= plan.tol) ++r.within;
    }
    return r;
}

struct ConeLevel {
    double t = 0;
    double hausdorff = 0;
};

struct TangentConeReport {
    std::vector<std::vector<double>> limit;  ///< tangent vectors of the sampled arcs
    std::vector<ConeLevel> levels;
    std::optional<TangencyEstimate> decay;   ///< none when the distances vanish
    double mesh_tolerance = 0;               ///< largest gap between rescaled link samples at the finest scale
    std::size_t rays = 0;                    ///< distinct directions in the limit set
};

inline double hausdorff(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    auto one_sided = [](const auto& x, const auto& y) {
        double worst = 0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, euclid(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

/// Rescaled links (1/t) X_t against the set of tangent vectors of the arcs
/// through the link samples.
inline TangentConeReport tangent_cone_sample(const GermModel& m, const SamplePlan& plan) {
    if (plan.levels.size() < 4) throw ModelError("tangent cone sampling needs at least 4 scales");
    TangentConeReport r;
    for (std::size_t k = 0; k < m.patches.size(); ++k)
        for (double s : s_grid(m.patches[k], plan.resolution)) {
            auto tv = tangent_vector(m.patches[k].arc_at(s, m.axis));
            std::vector<double> v;
            for (const auto& x : tv.raw) v.push_back(to_double(x));
            bool fresh = std::none_of(r.limit.begin(), r.limit.end(), [&](const auto& w) { return euclid(v, w) < 1e-12; });
            if (fresh) r.limit.push_back(std::move(v));
        }
    std::vector<std::vector<double>> units;
    for (const auto& v : r.limit) {
        std::vector<double> u = v;
        for (auto& x : u) x /= norm(v);
        if (std::none_of(units.begin(), units.end(), [&](const auto& w) { return euclid(u, w) < 1e-9; })) units.push_back(u);
    }
    r.rays = units.size();
    std::vector<std::pair<double, double>> samples;
    bool all_positive = true;
    for (double t : plan.levels) {
        std::vector<std::vector<double>> pts;
        for (const auto& c : sample_link(m, t, plan))
            for (auto p : c.points) {
                for (auto& x : p) x /= t;
                pts.push_back(std::move(p));
            }
        double h = hausdorff(pts, r.limit);
        r.levels.push_back({t, h});
        samples.emplace_back(t, h);
        if (!(h > 1e-12)) all_positive = false;
        if (t == plan.levels.back()) {
            for (const auto& c : sample_link(m, t, plan))
                for (std::size_t i = 0; i + 1 < c.points.size(); ++i)
                    r.mesh_tolerance = std::max(r.mesh_tolerance, euclid(c.points[i], c.points[i + 1]) / t);
        }
    }
    if (all_positive) r.decay = fit_samples(samples);
    return r;
}

/// Exponent of the inner link diameter; the link must be one closed chain.
inline TangencyEstimate horn_exponent_numeric(const GermModel& m, const SamplePlan& plan) {
    auto comps = link_components(m, plan.levels.front(), plan);
    if (comps.size() != 1 || !comps[0].closed) throw ModelError("link is not a single closed chain");
    return link_diameter_order(m, plan);
}

}  // namespace lipgeo
