#pragma once

#include "lipgeo/complex.hpp"
#include "lipgeo/json_io.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

namespace lipgeo::io {

inline json to_json(const HolderComplex& c) {
    json edges = json::array();
    for (const auto& e : c.edges())
        edges.push_back({{"id", e.id}, {"ends", {c.vertices()[e.a], c.vertices()[e.b]}}, {"beta", to_string(e.beta)}});
    return {{"vertices", c.vertices()}, {"edges", edges}};
}

inline HolderComplex complex_from_json(const json& j) {
    try {
        std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
        std::vector<EdgeSpec> edges;
        std::size_t k = 0;
        for (const auto& je : j.at("edges")) {
            ++k;
            std::string id = je.contains("id") ? je.at("id").get<std::string>() : "g" + std::to_string(k);
            const auto& ends = je.at("ends");
            if (!ends.is_array() || ends.size() != 2) throw ParseError("edge '" + id + "' needs two ends");
            edges.push_back({id, ends.at(0).get<std::string>(), ends.at(1).get<std::string>(), rational_from_json(je.at("beta"))});
        }
        return HolderComplex(std::move(vertices), edges);
    } catch (const json::exception& e) {
        throw ParseError(std::string("complex: ") + e.what());
    } catch (const ComplexError& e) {
        throw ParseError(std::string("complex: ") + e.what());
    }
}

inline json to_json(const Isomorphism& iso) {
    json v = json::object(), e = json::object();
    for (const auto& [a, b] : iso.vertices) v[a] = b;
    for (const auto& [a, b] : iso.edges) e[a] = b;
    return {{"vertices", v}, {"edges", e}};
}

// Undirected multigraph; edge label is beta.
inline std::string to_dot(const HolderComplex& c, const std::string& name = "complex") {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char ch : s) {
            if (ch == '"' || ch == '\\') out += '\\';
            out += ch;
        }
        return out + "\"";
    };
    std::ostringstream os;
    os << "graph " << quote(name) << " {\n";
    for (std::size_t v = 0; v < c.vertex_count(); ++v)
        os << "  " << quote(c.vertices()[v]) << " [xlabel=" << quote(to_string(classify_vertex(c, v))) << "];\n";
    for (const auto& e : c.edges())
        os << "  " << quote(c.vertices()[e.a]) << " -- " << quote(c.vertices()[e.b]) << " [label=" << quote(to_string(e.beta))
           << ", id=" << quote(e.id) << "];\n";
    os << "}\n";
    return os.str();
}

// Vertices on a circle; parallel edges bow apart so each label stays readable.
inline std::string to_svg(const HolderComplex& c) {
    const double size = 400, r = 150, mid = size / 2;
    const std::size_t n = c.vertex_count();
    auto pos = [&](std::size_t v) {
        double a = 2 * std::numbers::pi * static_cast<double>(v) / static_cast<double>(n);
        return std::pair{mid + r * std::cos(a), mid + r * std::sin(a)};
    };
    auto escape = [](const std::string& s) {
        std::string out;
        for (char ch : s) {
            if (ch == '<') out += "&lt;";
            else if (ch == '>') out += "&gt;";
            else if (ch == '&') out += "&amp;";
            else out += ch;
        }
        return out;
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::map<std::pair<std::size_t, std::size_t>, int> seen;
    for (const auto& e : c.edges()) {
        auto [x1, y1] = pos(e.a);
        auto [x2, y2] = pos(e.b);
        int k = seen[{std::min(e.a, e.b), std::max(e.a, e.b)}]++;
        double bow = 30.0 * ((k + 1) / 2) * (k % 2 ? 1 : -1);
        double len = std::hypot(x2 - x1, y2 - y1);
        double cx = (x1 + x2) / 2 - bow * (y2 - y1) / len, cy = (y1 + y2) / 2 + bow * (x2 - x1) / len;
        os << "<path d=\"M" << x1 << ',' << y1 << " Q" << cx << ',' << cy << ' ' << x2 << ',' << y2
           << "\" fill=\"none\" stroke=\"black\"/>\n";
        os << "<text x=\"" << (x1 + 2 * cx + x2) / 4 << "\" y=\"" << (y1 + 2 * cy + y2) / 4 << "\" fill=\"blue\">"
           << escape(to_string(e.beta)) << "</text>\n";
    }
    for (std::size_t v = 0; v < n; ++v) {
        auto [x, y] = pos(v);
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"4\"/>\n";
        os << "<text x=\"" << x + 6 << "\" y=\"" << y - 6 << "\">" << escape(c.vertices()[v]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace lipgeo::io
