#pragma once

// Germ models for Hölder complexes and for the standard examples (horns,
// Hölder triangles, the cusp).

#include "lipgeo/complex.hpp"
#include "lipgeo/model.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace lipgeo {

struct RealizedModel {
    GermModel model;
    std::vector<std::string> patch_edges;     ///< edge id per patch
    std::map<std::string, Arc> vertex_arcs;  ///< symbolic arc per vertex
};

/// Layout in R^5 = (vertex plane) x (edge plane) x axis:
///   vertex v  ->  (c_V t^B d_v, 0, 0, t)
///   edge g    ->  (c_V t^B lerp(d_a, d_b, s), c_g t^beta tent(s) n_g, t)
/// where B is the largest exponent, d_v distinct unit vectors and n_g
/// pairwise non-parallel. Patch g is a beta(g)-Hölder triangle. The
/// amplitudes c = 2^(-32 (exponent - min beta)) push the higher-order terms
/// far below the dominant one so exponent fits converge at moderate scales.
inline RealizedModel realize_model(const HolderComplex& c) {
    Rational bmin = c.edges().front().beta, bmax = bmin;
    for (const auto& e : c.edges()) {
        bmin = std::min(bmin, e.beta);
        bmax = std::max(bmax, e.beta);
    }
    auto amplitude = [&](const Rational& beta) { return std::exp2(-32.0 * to_double(beta - bmin)); };
    const double cv = amplitude(bmax);

    const std::size_t nv = c.vertex_count();
    std::vector<std::pair<Rational, Rational>> dirs;
    for (std::size_t i = 0; i < nv; ++i) dirs.push_back(rational_unit_point(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(nv)));

    RealizedModel out;
    out.model.dim = 5;
    out.model.axis = 4;
    out.model.name = "realized complex";
    const std::size_t ne = c.edge_count();
    std::map<std::size_t, std::vector<PatchEnd>> ends_at;
    for (std::size_t k = 0; k < ne; ++k) {
        const auto& e = c.edges()[k];
        auto [nx, ny] = rational_unit_point(std::numbers::pi * static_cast<double>(k) / static_cast<double>(ne));
        const double cg = amplitude(e.beta);
        const auto& da = dirs[e.a];
        const auto& db = dirs[e.b];
        auto tent = [&](double peak) { return PiecewiseLinear{{{0.0, 0.0}, {0.5, peak}, {1.0, 0.0}}}; };
        Patch p;
        p.label = e.id;
        p.coords.push_back({{bmax, PiecewiseLinear::linear(cv * to_double(da.first), cv * to_double(db.first))}});
        p.coords.push_back({{bmax, PiecewiseLinear::linear(cv * to_double(da.second), cv * to_double(db.second))}});
        p.coords.push_back({{e.beta, tent(cg * to_double(nx))}});
        p.coords.push_back({{e.beta, tent(cg * to_double(ny))}});
        p.coords.push_back({{Rational(1), PiecewiseLinear::constant(1.0)}});
        out.model.patches.push_back(std::move(p));
        out.patch_edges.push_back(e.id);
        ends_at[e.a].push_back({k, 0});
        ends_at[e.b].push_back({k, 1});
    }
    for (const auto& [v, ends] : ends_at)
        for (std::size_t i = 1; i < ends.size(); ++i) out.model.gluings.push_back({ends[0], ends[i]});

    for (std::size_t v = 0; v < nv; ++v) {
        const auto& d = dirs[v];
        // Coefficients must match the patch values bit for bit, so go through double.
        Rational x = exact_rational(cv * to_double(d.first));
        Rational y = exact_rational(cv * to_double(d.second));
        out.vertex_arcs.emplace(c.vertices()[v],
                                Arc({Series::monomial(x, bmax), Series::monomial(y, bmax), Series::zero(), Series::zero(),
                                     Series::monomial(1, 1)},
                                    Parameterization::coordinate, 4));
    }
    out.model.validate();
    return out;
}

/// Standard horn {x^2 + y^2 = z^(2 beta)} with its link approximated by a
/// regular polygon with rational vertices on the unit circle. One closed
/// patch; s runs once around.
inline GermModel horn_model(const Rational& beta, std::size_t sides = 48) {
    PiecewiseLinear px, py;
    for (std::size_t i = 0; i <= sides; ++i) {
        double s = static_cast<double>(i) / static_cast<double>(sides);
        auto [x, y] = rational_unit_point(2 * std::numbers::pi * s);
        if (i == sides) std::tie(x, y) = rational_unit_point(0.0);
        px.points.emplace_back(s, to_double(x));
        py.points.emplace_back(s, to_double(y));
    }
    GermModel m;
    m.dim = 3;
    m.axis = 2;
    m.name = "horn " + to_string(beta);
    Patch p;
    p.label = "horn";
    p.coords = {{{beta, px}}, {{beta, py}}, {{Rational(1), PiecewiseLinear::constant(1.0)}}};
    m.patches.push_back(std::move(p));
    m.gluings.push_back({{0, 0}, {0, 1}});
    m.validate();
    return m;
}

/// Horn split into `pieces` sector patches glued cyclically.
inline GermModel split_horn_model(const Rational& beta, std::size_t pieces, std::size_t sides = 48) {
    GermModel whole = horn_model(beta, sides);
    const auto& px = whole.patches[0].coords[0][0].coeff;
    const auto& py = whole.patches[0].coords[1][0].coeff;
    GermModel m;
    m.dim = 3;
    m.axis = 2;
    m.name = "split horn " + to_string(beta);
    for (std::size_t k = 0; k < pieces; ++k) {
        double s0 = static_cast<double>(k) / static_cast<double>(pieces);
        double s1 = static_cast<double>(k + 1) / static_cast<double>(pieces);
        PiecewiseLinear qx, qy;
        for (std::size_t i = 0; i < px.points.size(); ++i) {
            double s = px.points[i].first;
            if (s < s0 - 1e-12 || s > s1 + 1e-12) continue;
            qx.points.emplace_back((s - s0) / (s1 - s0), px.points[i].second);
            qy.points.emplace_back((s - s0) / (s1 - s0), py.points[i].second);
        }
        Patch p;
        p.label = "sector" + std::to_string(k);
        p.coords = {{{beta, qx}}, {{beta, qy}}, {{Rational(1), PiecewiseLinear::constant(1.0)}}};
        m.patches.push_back(std::move(p));
        m.gluings.push_back({{k, 1}, {(k + 1) % pieces, 0}});
    }
    m.validate();
    return m;
}

/// Standard beta-Hölder triangle {0 <= y <= x^beta} in the plane, x = t.
inline GermModel triangle_model(const Rational& beta) {
    GermModel m;
    m.dim = 2;
    m.axis = 0;
    m.name = "triangle " + to_string(beta);
    Patch p;
    p.label = "T";
    p.coords = {{{Rational(1), PiecewiseLinear::constant(1.0)}}, {{beta, PiecewiseLinear::linear(0.0, 1.0)}}};
    m.patches.push_back(std::move(p));
    m.validate();
    return m;
}

/// The curve {x^3 = y^2}: two branches (t, +-t^(3/2)) meeting at the origin.
inline GermModel cusp_model() {
    GermModel m;
    m.dim = 2;
    m.axis = 0;
    m.name = "cusp";
    for (double sign : {1.0, -1.0}) {
        Patch p;
        p.label = sign > 0 ? "upper" : "lower";
        p.coords = {{{Rational(1), PiecewiseLinear::constant(1.0)}}, {{Rational(3, 2), PiecewiseLinear::constant(sign)}}};
        m.patches.push_back(std::move(p));
    }
    m.validate();
    return m;
}

}  // namespace lipgeo
