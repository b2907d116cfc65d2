#pragma once

#include "lipgeo/metriclab.hpp"

#include <cstdio>
#include <sstream>

namespace lipgeo::io {

/// Non-finite doubles become strings so reports stay valid JSON.
inline json number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

inline json to_json(const SamplePlan& p) {
    json levels = json::array();
    for (double t : p.levels) levels.push_back(t);
    return {{"levels", levels},
            {"resolution", p.resolution},
            {"annulus_octaves", p.annulus_octaves},
            {"steps_per_octave", p.steps_per_octave},
            {"seed", p.seed},
            {"tol", p.tol}};
}

inline json to_json(const PointRef& r) { return {{"patch", r.patch}, {"s", r.s}}; }

inline PointRef point_ref_from_json(const json& j) {
    try {
        return {j.at("patch").get<std::size_t>(), j.at("s").get<double>()};
    } catch (const json::exception& e) {
        throw ParseError(std::string("point: ") + e.what());
    }
}

inline json to_json(const TangencyEstimate& e) {
    json samples = json::array();
    for (const auto& [t, d] : e.samples) samples.push_back({t, d});
    if (e.infinite) return {{"exponent", "inf"}, {"samples", samples}};
    return {{"exponent", number(e.fit.exponent)}, {"residual", number(e.fit.residual)}, {"samples", samples}};
}

inline json to_json(const LneReport& r) {
    json pairs = json::array(), witnesses = json::array();
    for (const auto& p : r.pairs) {
        json jp = {{"i", p.i},
                   {"j", p.j},
                   {"tord", number(p.outer.exponent())},
                   {"itord", number(p.inner.exponent())},
                   {"violation", p.violation}};
        if (p.violation) witnesses.push_back(jp);
        pairs.push_back(std::move(jp));
    }
    json arcs = json::array();
    for (const auto& a : r.arcs) arcs.push_back(to_json(a));
    json out = {{"mode", to_string(r.mode)}, {"tol", r.tol}, {"passes", r.passes()}, {"arcs", arcs},
                {"violations", witnesses}, {"pairs", pairs}};
    if (r.beta) out["beta"] = r.beta->str();
    return out;
}

inline PancakeDecomposition pancake_decomposition_from_json(const json& j) {
    try {
        PancakeDecomposition d;
        for (const auto& g : j.at("pancakes")) {
            d.groups.push_back(g.at("patches").get<std::vector<std::size_t>>());
            d.betas.push_back(exponent_from_json(g.at("beta")));
        }
        return d;
    } catch (const json::exception& e) {
        throw ParseError(std::string("pancake decomposition: ") + e.what());
    }
}

inline json to_json(const PancakeReport& r) {
    json pancakes = json::array(), pairs = json::array();
    for (const auto& p : r.pancakes)
        pancakes.push_back({{"patches", p.patches},
                            {"claimed_beta", p.claimed.str()},
                            {"estimated_beta", number(p.beta_estimate.exponent())},
                            {"lne", p.lne},
                            {"beta_matches", p.beta_matches}});
    for (const auto& a : r.adjacent) pairs.push_back({{"a", a.a}, {"b", a.b}, {"union_lne", a.union_lne}});
    return {{"verdict", r.verdict()}, {"valid", r.valid},         {"minimal", r.minimal},
            {"resolution", r.resolution}, {"pancakes", pancakes}, {"adjacent", pairs},
            {"findings", r.findings}};
}

inline json to_json(const ProjectionReport& r) {
    json est = json::array();
    for (double e : r.estimates) est.push_back(number(e));
    return {{"seed", r.seed}, {"beta", r.beta.str()}, {"tol", r.tol}, {"planes", r.estimates.size()},
            {"within_tol", r.within}, {"fraction_within", r.fraction_within()}, {"estimates", est}};
}

inline json to_json(const TangentConeReport& r) {
    json levels = json::array();
    for (const auto& l : r.levels) levels.push_back({{"t", l.t}, {"hausdorff", l.hausdorff}});
    json out = {{"rays", r.rays}, {"limit_points", r.limit.size()}, {"mesh_tolerance", r.mesh_tolerance}, {"levels", levels}};
    out["decay_exponent"] = r.decay ? number(r.decay->exponent()) : json("converged");
    return out;
}

}  // namespace lipgeo::io

namespace lipgeo {

/// Orthogonal projection of link polylines onto coordinates (ax, ay), each
/// chain scaled by 1/t when `rescale` is set.
inline std::string link_svg(const GermModel& m, const std::vector<double>& scales, const SamplePlan& plan,
                            std::size_t ax, std::size_t ay, bool rescale = true) {
    if (ax >= m.dim || ay >= m.dim) throw ModelError("plot axis out of range");
    std::vector<std::vector<std::pair<double, double>>> lines;
    double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    bool first = true;
    for (double t : scales)
        for (const auto& c : sample_link(m, t, plan)) {
            std::vector<std::pair<double, double>> line;
            for (const auto& p : c.points) {
                double x = p[ax] / (rescale ? t : 1.0), y = p[ay] / (rescale ? t : 1.0);
                if (first) lo_x = hi_x = x, lo_y = hi_y = y, first = false;
                lo_x = std::min(lo_x, x), hi_x = std::max(hi_x, x), lo_y = std::min(lo_y, y), hi_y = std::max(hi_y, y);
                line.emplace_back(x, y);
            }
            lines.push_back(std::move(line));
        }
    const double size = 400, pad = 40;
    double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-300});
    auto px = [&](double x) { return pad + (x - lo_x) / span * size; };
    auto py = [&](double y) { return pad + size - (y - lo_y) / span * size; };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * pad << "\" height=\"" << size + 2 * pad << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<line x1=\"" << pad << "\" y1=\"" << pad + size << "\" x2=\"" << pad + size << "\" y2=\"" << pad + size
      << "\" stroke=\"gray\"/>\n";
    o << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << pad + size << "\" stroke=\"gray\"/>\n";
    o << "<text x=\"" << pad + size / 2 << "\" y=\"" << size + 1.7 * pad << "\">x" << ax << (rescale ? " / t" : "") << "</text>\n";
    o << "<text x=\"4\" y=\"" << pad + size / 2 << "\">x" << ay << (rescale ? " / t" : "") << "</text>\n";
    for (const auto& line : lines) {
        o << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
        for (const auto& [x, y] : line) o << px(x) << ',' << py(y) << ' ';
        o << "\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace lipgeo
