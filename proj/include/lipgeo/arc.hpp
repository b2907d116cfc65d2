#pragma once

#include "lipgeo/exponent.hpp"
#include "lipgeo/series.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lipgeo {

class ArcError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Parameterization { distance, coordinate };

inline std::string to_string(Parameterization p) { return p == Parameterization::distance ? "distance" : "coordinate"; }

/// A real arc germ t -> (x_1(t), ..., x_n(t)) with finite expansions.
///
/// Distance-parameterized arcs have lowest exponent 1 and a unit vector of
/// t^1 coefficients. Coordinate-parameterized arcs have one coordinate equal
/// to t exactly (the axis); tangency orders are unchanged by this
/// reparameterization since t -> |gamma(t)| has derivative bounded away from 0.
class Arc {
public:
    Arc(std::vector<Series> coords, Parameterization param, std::optional<std::size_t> axis = std::nullopt)
        : coords_(std::move(coords)), param_(param) {
        if (coords_.size() < 2) throw ArcError("arc needs at least 2 coordinates");
        for (const auto& c : coords_)
            for (const auto& t : c.terms())
                if (t.exp < 1) throw ArcError("arc exponent " + to_string(t.exp) + " < 1");
        if (param_ == Parameterization::coordinate) {
            const Series t = Series::monomial(1, 1);
            if (axis) {
                if (*axis >= coords_.size() || !(coords_[*axis] == t))
                    throw ArcError("axis coordinate is not exactly t");
                axis_ = *axis;
            } else {
                for (std::size_t i = 0; i < coords_.size(); ++i)
                    if (coords_[i] == t) {
                        axis_ = i;
                        break;
                    }
                if (!axis_) throw ArcError("coordinate-parameterized arc has no coordinate equal to t");
            }
        } else {
            Rational norm2 = 0;
            for (const auto& c : coords_) {
                Rational a = c.coefficient_at(1);
                norm2 += a * a;
            }
            if (norm2 != 1) throw ArcError("distance-parameterized arc: t^1 coefficients have norm^2 " + to_string(norm2) + " != 1");
        }
    }

    /// Planar arc (u, w) = (t, w(t)).
    static Arc planar(Series w) { return Arc({Series::monomial(1, 1), std::move(w)}, Parameterization::coordinate, 0); }

    std::size_t dim() const { return coords_.size(); }
    const std::vector<Series>& coords() const { return coords_; }
    const Series& coord(std::size_t i) const { return coords_.at(i); }
    Parameterization param() const { return param_; }
    std::optional<std::size_t> axis() const { return axis_; }

    std::vector<double> evaluate(double t) const {
        std::vector<double> p(coords_.size(), 0.0);
        for (std::size_t i = 0; i < coords_.size(); ++i)
            for (const auto& term : coords_[i].terms()) p[i] += to_double(term.coeff) * std::pow(t, to_double(term.exp));
        return p;
    }

    friend bool operator==(const Arc& a, const Arc& b) {
        return a.param_ == b.param_ && a.axis_ == b.axis_ && a.coords_ == b.coords_;
    }

private:
    std::vector<Series> coords_;
    Parameterization param_;
    std::optional<std::size_t> axis_;
};

/// Finite sample of the Valette link: nonempty, one ambient dimension.
class ArcFamily {
public:
    explicit ArcFamily(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
        if (arcs_.empty()) throw ArcError("empty arc family");
        for (const auto& a : arcs_)
            if (a.dim() != arcs_.front().dim()) throw ArcError("arc family mixes ambient dimensions");
    }
    const std::vector<Arc>& arcs() const { return arcs_; }
    std::size_t size() const { return arcs_.size(); }
    const Arc& operator[](std::size_t i) const { return arcs_[i]; }
    auto begin() const { return arcs_.begin(); }
    auto end() const { return arcs_.end(); }

private:
    std::vector<Arc> arcs_;
};

/// Order of |g1(t) - g2(t)|: the first exponent where some coordinate differs.
inline Exponent arc_tord(const Arc& g1, const Arc& g2) {
    if (g1.dim() != g2.dim()) throw ArcError("tord: dimension mismatch");
    if (g1.param() != g2.param() || g1.axis() != g2.axis())
        throw ArcError("tord: arcs use different parameterization conventions");
    Exponent best = Exponent::infinity();
    std::optional<Rational> undecided;
    for (std::size_t i = 0; i < g1.dim(); ++i) {
        Series d = g1.coord(i) - g2.coord(i);
        if (d.empty()) {
            if (d.precision()) undecided = undecided ? std::min(*undecided, *d.precision()) : *d.precision();
            continue;
        }
        best = min(best, d.order());
    }
    if (undecided && (best.is_infinite() || best.value() > *undecided))
        throw InconclusiveError("tord undecided beyond t^" + to_string(*undecided), *undecided);
    return best;
}

/// sup over Z1 of sup over Z2 of pairwise tord (a max over finite samples).
inline Exponent set_tord(const ArcFamily& z1, const ArcFamily& z2) {
    if (z1.arcs().front().dim() != z2.arcs().front().dim()) throw ArcError("set_tord: dimension mismatch");
    Exponent best(0);
    bool first = true;
    for (const auto& a : z1)
        for (const auto& b : z2) {
            Exponent e = arc_tord(a, b);
            if (first || e > best) best = e;
            first = false;
        }
    return best;
}

/// tord(g, Z) = sup over Z of tord(g, lambda).
inline Exponent arc_set_tord(const Arc& g, const ArcFamily& z) {
    Exponent best(0);
    bool first = true;
    for (const auto& b : z) {
        Exponent e = arc_tord(g, b);
        if (first || e > best) best = e;
        first = false;
    }
    return best;
}

struct TangentVector {
    std::vector<Rational> raw;                   ///< t^1 coefficients
    std::optional<std::vector<Rational>> exact;  ///< unit vector when the norm is rational
    std::vector<double> unit;
};

inline TangentVector tangent_vector(const Arc& g) {
    TangentVector tv;
    Rational norm2 = 0;
    for (const auto& c : g.coords()) {
        tv.raw.push_back(c.coefficient_at(1));
        norm2 += tv.raw.back() * tv.raw.back();
    }
    if (norm2 == 0) throw ArcError("degenerate arc: no exponent-1 terms");
    double n = std::sqrt(to_double(norm2));
    for (const auto& r : tv.raw) tv.unit.push_back(to_double(r) / n);
    if (auto root = rational_power(norm2, Rational(1, 2))) {
        std::vector<Rational> e;
        for (const auto& r : tv.raw) e.push_back(r / *root);
        tv.exact = std::move(e);
    }
    return tv;
}

}  // namespace lipgeo
