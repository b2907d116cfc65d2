#pragma once

#include "lipgeo/arc.hpp"
#include "lipgeo/json_io.hpp"
#include "lipgeo/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lipgeo {

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Piecewise-linear function on [0,1] given by sorted breakpoints.
struct PiecewiseLinear {
    std::vector<std::pair<double, double>> points;

    static PiecewiseLinear constant(double c) { return {{{0.0, c}, {1.0, c}}}; }
    static PiecewiseLinear linear(double a, double b) { return {{{0.0, a}, {1.0, b}}}; }

    double operator()(double s) const {
        if (points.empty()) return 0.0;
        if (s <= points.front().first) return points.front().second;
        if (s >= points.back().first) return points.back().second;
        auto it = std::upper_bound(points.begin(), points.end(), s,
                                   [](double x, const auto& p) { return x < p.first; });
        const auto& [s1, v1] = *it;
        const auto& [s0, v0] = *(it - 1);
        if (s1 == s0) return v1;
        return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
    }

    bool is_constant() const {
        return std::all_of(points.begin(), points.end(),
                           [&](const auto& p) { return p.second == points.front().second; });
    }
};

struct PatchTerm {
    Rational exp;
    PiecewiseLinear coeff;
};

/// Parametric piece (t, s) in (0, tmax] x [0,1] -> R^n whose coordinates are
/// sums a_k(s) t^{q_k}. At fixed t the link segment is a polyline with
/// vertices at the breakpoints. A patch with s-independent coefficients is a
/// single arc (used for curve germs).
struct Patch {
    std::vector<std::vector<PatchTerm>> coords;
    std::string label;

    std::size_t dim() const { return coords.size(); }

    std::vector<double> point(double t, double s) const {
        std::vector<double> p(coords.size(), 0.0);
        for (std::size_t i = 0; i < coords.size(); ++i)
            for (const auto& term : coords[i]) p[i] += term.coeff(s) * std::pow(t, to_double(term.exp));
        return p;
    }

    std::vector<double> breakpoints() const {
        std::set<double> s{0.0, 1.0};
        for (const auto& c : coords)
            for (const auto& term : c)
                for (const auto& bp : term.coeff.points)
                    if (bp.first > 0.0 && bp.first < 1.0) s.insert(bp.first);
        return {s.begin(), s.end()};
    }

    bool is_arc() const {
        for (const auto& c : coords)
            for (const auto& term : c)
                if (!term.coeff.is_constant()) return false;
        return true;
    }

    /// Symbolic arc s = const, when the coefficients there are rational.
    Arc arc_at(double s, std::size_t axis) const {
        std::vector<Series> cs;
        for (const auto& c : coords) {
            std::vector<Term> terms;
            for (const auto& term : c) terms.push_back({term.exp, exact_rational(term.coeff(s))});
            cs.push_back(Series::from_terms(std::move(terms)));
        }
        return Arc(std::move(cs), Parameterization::coordinate, axis);
    }
};

struct PatchEnd {
    std::size_t patch = 0;
    int end = 0;  // 0: s = 0, 1: s = 1
    friend bool operator==(const PatchEnd&, const PatchEnd&) = default;
    friend auto operator<=>(const PatchEnd&, const PatchEnd&) = default;
};

struct Gluing {
    PatchEnd a;
    PatchEnd b;
};

/// Surface (or curve) germ assembled from patches glued along boundary arcs.
/// Coordinate `axis` equals t on every patch.
struct GermModel {
    std::size_t dim = 0;
    std::size_t axis = 0;
    std::vector<Patch> patches;
    std::vector<Gluing> gluings;
    std::string name;

    void validate(double t_probe = 1.0 / 64) const {
        if (dim < 2) throw ModelError("model dimension must be >= 2");
        if (axis >= dim) throw ModelError("axis out of range");
        if (patches.empty()) throw ModelError("model has no patches");
        for (const auto& p : patches) {
            if (p.dim() != dim) throw ModelError("patch '" + p.label + "' has wrong dimension");
            for (const auto& c : p.coords)
                for (const auto& term : c) {
                    if (term.exp < 1) throw ModelError("patch exponent below 1");
                    if (term.coeff.points.empty()) throw ModelError("empty piecewise-linear coefficient");
                    for (std::size_t i = 1; i < term.coeff.points.size(); ++i)
                        if (term.coeff.points[i].first < term.coeff.points[i - 1].first)
                            throw ModelError("breakpoints must be sorted");
                }
        }
        for (const auto& g : gluings) {
            for (const auto& e : {g.a, g.b})
                if (e.patch >= patches.size() || (e.end != 0 && e.end != 1)) throw ModelError("bad gluing reference");
            auto pa = patches[g.a.patch].point(t_probe, g.a.end);
            auto pb = patches[g.b.patch].point(t_probe, g.b.end);
            double d = 0, scale = 0;
            for (std::size_t i = 0; i < dim; ++i) {
                d += (pa[i] - pb[i]) * (pa[i] - pb[i]);
                scale += pa[i] * pa[i];
            }
            if (std::sqrt(d) > 1e-9 * std::sqrt(scale)) throw ModelError("glued ends do not coincide");
        }
    }
};

namespace io {

inline json to_json(const PiecewiseLinear& f) {
    json pts = json::array();
    for (const auto& [s, v] : f.points) pts.push_back({s, v});
    return pts;
}

inline json to_json(const GermModel& m) {
    json patches = json::array();
    for (const auto& p : m.patches) {
        json coords = json::array();
        for (const auto& c : p.coords) {
            json terms = json::array();
            for (const auto& t : c) terms.push_back({{"exp", to_string(t.exp)}, {"pl", to_json(t.coeff)}});
            coords.push_back(terms);
        }
        json jp{{"coords", coords}};
        if (!p.label.empty()) jp["label"] = p.label;
        patches.push_back(jp);
    }
    json gl = json::array();
    for (const auto& g : m.gluings)
        gl.push_back({{"a", {{"patch", g.a.patch}, {"end", g.a.end}}}, {"b", {{"patch", g.b.patch}, {"end", g.b.end}}}});
    json out{{"dim", m.dim}, {"axis", m.axis}};
    if (!m.name.empty()) out["name"] = m.name;
    out["patches"] = patches;
    out["gluings"] = gl;
    return out;
}

inline GermModel germ_model_from_json(const json& j) {
    try {
        GermModel m;
        m.dim = j.at("dim").get<std::size_t>();
        m.axis = j.contains("axis") ? j.at("axis").get<std::size_t>() : m.dim - 1;
        if (j.contains("name")) m.name = j.at("name").get<std::string>();
        for (const auto& jp : j.at("patches")) {
            Patch p;
            if (jp.contains("label")) p.label = jp.at("label").get<std::string>();
            for (const auto& jc : jp.at("coords")) {
                std::vector<PatchTerm> terms;
                for (const auto& jt : jc) {
                    PiecewiseLinear f;
                    for (const auto& bp : jt.at("pl")) f.points.emplace_back(bp.at(0).get<double>(), bp.at(1).get<double>());
                    terms.push_back({rational_from_json(jt.at("exp")), std::move(f)});
                }
                p.coords.push_back(std::move(terms));
            }
            m.patches.push_back(std::move(p));
        }
        if (j.contains("gluings"))
            for (const auto& jg : j.at("gluings"))
                m.gluings.push_back({{jg.at("a").at("patch").get<std::size_t>(), jg.at("a").at("end").get<int>()},
                                     {jg.at("b").at("patch").get<std::size_t>(), jg.at("b").at("end").get<int>()}});
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("germ model: ") + e.what());
    } catch (const ModelError& e) {
        throw ParseError(std::string("germ model: ") + e.what());
    }
}

}  // namespace io

/// Exact rational point on the unit circle near angle theta, from the
/// parameterization ((1-m^2)/(1+m^2), 2m/(1+m^2)) with m ~ tan(theta/2).
inline std::pair<Rational, Rational> rational_unit_point(double theta, long denominator = 4096) {
    double m = std::tan(theta / 2);
    Rational r(static_cast<long long>(std::llround(m * static_cast<double>(denominator))), denominator);
    Rational d = 1 + r * r;
    return {(1 - r * r) / d, 2 * r / d};
}

}  // namespace lipgeo
