#pragma once

// JSON encodings shared by every module: exponents as "p/q" or "inf",
// series as [{"exp":..,"c":..}], arcs as {"param":..,"coords":[..]},
// expressions as nested {"op":..} objects.

#include "lipgeo/arc.hpp"
#include "lipgeo/expr.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace lipgeo::io {

using json = nlohmann::ordered_json;

inline std::string require_string(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    const json& v = j.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ParseError(std::string("field '") + key + "' must be a string like \"p/q\"");
}

inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) return parse_rational(j.dump());
    throw ParseError("expected a rational, got " + j.dump());
}

inline json to_json(const Rational& r) { return to_string(r); }
inline json to_json(const Exponent& e) { return e.str(); }

inline Exponent exponent_from_json(const json& j) {
    if (j.is_string()) return Exponent::parse(j.get<std::string>());
    return Exponent(rational_from_json(j));
}

inline json to_json(const Series& s) {
    json out = json::array();
    for (const auto& t : s.terms()) out.push_back({{"exp", to_string(t.exp)}, {"c", to_string(t.coeff)}});
    return out;
}

inline Series series_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("series must be a list of terms");
    std::vector<Term> terms;
    for (const auto& t : j) terms.push_back({rational_from_json(t.at("exp")), rational_from_json(t.at("c"))});
    return Series::from_terms(std::move(terms));
}

inline json to_json(const Arc& a) {
    json coords = json::array();
    for (const auto& c : a.coords()) coords.push_back(to_json(c));
    json out{{"param", to_string(a.param())}, {"coords", coords}};
    if (a.axis()) out["axis"] = *a.axis();
    return out;
}

inline Arc arc_from_json(const json& j) {
    std::string p = require_string(j, "param");
    Parameterization param;
    if (p == "distance") param = Parameterization::distance;
    else if (p == "coordinate") param = Parameterization::coordinate;
    else throw ParseError("unknown param '" + p + "'");
    std::vector<Series> coords;
    for (const auto& c : j.at("coords")) coords.push_back(series_from_json(c));
    std::optional<std::size_t> axis;
    if (j.contains("axis")) axis = j.at("axis").get<std::size_t>();
    try {
        return Arc(std::move(coords), param, axis);
    } catch (const ArcError& e) {
        throw ParseError(e.what());
    }
}

/// Accepts either a bare list of arcs or {"arcs":[...]}.
inline ArcFamily arc_family_from_json(const json& j) {
    const json& list = j.is_object() ? j.at("arcs") : j;
    std::vector<Arc> arcs;
    for (const auto& a : list) arcs.push_back(arc_from_json(a));
    try {
        return ArcFamily(std::move(arcs));
    } catch (const ArcError& e) {
        throw ParseError(e.what());
    }
}

inline json to_json(const Expr& f) {
    const auto& n = f.node();
    if (n.op == Expr::Op::mono) return {{"op", "mono"}, {"c", to_string(n.c)}, {"pu", to_string(n.pu)}, {"pw", to_string(n.pw)}};
    json args = json::array();
    for (const auto& a : n.args) args.push_back(to_json(a));
    return {{"op", to_string(n.op)}, {"args", args}};
}

inline Expr expr_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("expression must be an object");
    Expr::Op op = parse_op(require_string(j, "op"));
    if (op == Expr::Op::mono) {
        Rational c = rational_from_json(j.at("c"));
        Rational pu = j.contains("pu") ? rational_from_json(j.at("pu")) : Rational(0);
        Rational pw = j.contains("pw") ? rational_from_json(j.at("pw")) : Rational(0);
        if (pu < 0 || pw < 0) throw ParseError("monomial exponents must be non-negative");
        return Expr::mono(c, pu, pw);
    }
    std::vector<Expr> args;
    const json& a = j.contains("args") ? j.at("args") : j.at("arg");
    if (a.is_array())
        for (const auto& x : a) args.push_back(expr_from_json(x));
    else
        args.push_back(expr_from_json(a));
    try {
        return Expr::make(op, std::move(args));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace lipgeo::io
