#pragma once

#include "lipgeo/arc.hpp"
#include "lipgeo/exponent.hpp"
#include "lipgeo/series.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace lipgeo {

/// Expression trees in two formal variables u (first triangle coordinate)
/// and w (second). Immutable; subtrees are shared.
class Expr {
public:
    enum class Op { mono, add, sub, mul, abs, min, max };

    struct Node {
        Op op;
        Rational c;   // mono only
        Rational pu;  // mono only
        Rational pw;  // mono only
        std::vector<Expr> args;
    };

    Expr() : Expr(mono(0, 0, 0)) {}

    static Expr mono(Rational c, Rational pu, Rational pw) {
        if (pu < 0 || pw < 0) throw std::invalid_argument("monomial exponents must be non-negative");
        return Expr(std::make_shared<const Node>(Node{Op::mono, std::move(c), std::move(pu), std::move(pw), {}}));
    }
    static Expr constant(Rational c) { return mono(std::move(c), 0, 0); }
    static Expr u(Rational e = 1) { return mono(1, std::move(e), 0); }
    static Expr w(Rational e = 1) { return mono(1, 0, std::move(e)); }

    static Expr make(Op op, std::vector<Expr> args) {
        switch (op) {
        case Op::mono: throw std::invalid_argument("use Expr::mono");
        case Op::abs:
            if (args.size() != 1) throw std::invalid_argument("abs takes one argument");
            break;
        case Op::sub:
            if (args.size() != 2) throw std::invalid_argument("sub takes two arguments");
            break;
        default:
            if (args.empty()) throw std::invalid_argument("empty argument list");
        }
        return Expr(std::make_shared<const Node>(Node{op, 0, 0, 0, std::move(args)}));
    }

    const Node& node() const { return *node_; }
    Op op() const { return node_->op; }
    const std::vector<Expr>& args() const { return node_->args; }

    friend Expr operator+(Expr a, Expr b) { return make(Op::add, {std::move(a), std::move(b)}); }
    friend Expr operator-(Expr a, Expr b) { return make(Op::sub, {std::move(a), std::move(b)}); }
    friend Expr operator*(Expr a, Expr b) { return make(Op::mul, {std::move(a), std::move(b)}); }
    friend Expr abs(Expr a) { return make(Op::abs, {std::move(a)}); }
    friend Expr min(Expr a, Expr b) { return make(Op::min, {std::move(a), std::move(b)}); }
    friend Expr max(Expr a, Expr b) { return make(Op::max, {std::move(a), std::move(b)}); }

    std::string str() const {
        const Node& n = *node_;
        auto join = [&](const char* sep) {
            std::string s = "(";
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) s += sep;
                s += n.args[i].str();
            }
            return s + ")";
        };
        switch (n.op) {
        case Op::mono: {
            std::string s = to_string(n.c);
            if (n.pu != 0) s += "*u^" + to_string(n.pu);
            if (n.pw != 0) s += "*w^" + to_string(n.pw);
            return s;
        }
        case Op::add: return join(" + ");
        case Op::sub: return join(" - ");
        case Op::mul: return join(" * ");
        case Op::abs: return "|" + n.args[0].str() + "|";
        case Op::min: return "min" + join(", ");
        case Op::max: return "max" + join(", ");
        }
        return {};
    }

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

inline std::string to_string(Expr::Op op) {
    switch (op) {
    case Expr::Op::mono: return "mono";
    case Expr::Op::add: return "add";
    case Expr::Op::sub: return "sub";
    case Expr::Op::mul: return "mul";
    case Expr::Op::abs: return "abs";
    case Expr::Op::min: return "min";
    case Expr::Op::max: return "max";
    }
    return "?";
}

inline Expr::Op parse_op(const std::string& s) {
    for (auto op : {Expr::Op::mono, Expr::Op::add, Expr::Op::sub, Expr::Op::mul, Expr::Op::abs, Expr::Op::min,
                    Expr::Op::max})
        if (to_string(op) == s) return op;
    throw ParseError("unknown expression op '" + s + "'");
}

/// Substitutes the series u(t), w(t) into f. min/max/abs are resolved by the
/// sign of the leading coefficient of the difference; a difference that
/// vanishes only up to the resolution bound raises InconclusiveError.
inline Series substitute(const Expr& f, const Series& u, const Series& w, const Resolution& res) {
    const auto& n = f.node();
    switch (n.op) {
    case Expr::Op::mono: {
        if (n.c == 0) return Series::zero();
        Series s = Series::constant(n.c);
        if (n.pu != 0) s = s.multiply(u.pow(n.pu, res), res);
        if (n.pw != 0) s = s.multiply(w.pow(n.pw, res), res);
        return s;
    }
    case Expr::Op::add: {
        Series s;
        for (const auto& a : n.args) s = s + substitute(a, u, w, res);
        return s;
    }
    case Expr::Op::sub: return substitute(n.args[0], u, w, res) - substitute(n.args[1], u, w, res);
    case Expr::Op::mul: {
        Series s = Series::constant(1);
        for (const auto& a : n.args) s = s.multiply(substitute(a, u, w, res), res);
        return s;
    }
    case Expr::Op::abs: {
        Series s = substitute(n.args[0], u, w, res);
        if (s.empty()) return s;  // exact zero, or O(t^p) which is its own absolute value
        return s.sign() < 0 ? -s : s;
    }
    case Expr::Op::min:
    case Expr::Op::max: {
        Series best = substitute(n.args[0], u, w, res);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
            Series other = substitute(n.args[i], u, w, res);
            Series diff = other - best;
            if (diff.empty() && diff.is_exact()) continue;  // identical branches
            if (diff.empty())
                throw InconclusiveError("min/max tie unresolved up to t^" + to_string(*diff.precision()),
                                        *diff.precision());
            int sg = diff.sign();
            if ((n.op == Expr::Op::min && sg < 0) || (n.op == Expr::Op::max && sg > 0)) best = other;
        }
        return best;
    }
    }
    throw std::logic_error("bad expression node");
}

/// Order of f along a planar coordinate-parameterized arc (u = t, w = w(t)).
inline Exponent ord_on_arc(const Expr& f, const Arc& arc, const Resolution& res = {}) {
    if (arc.dim() != 2 || arc.param() != Parameterization::coordinate || arc.axis() != std::size_t{0})
        throw ArcError("ord_on_arc needs a planar arc with u = t");
    Series s = substitute(f, arc.coord(0), arc.coord(1), res);
    return s.order();
}

/// Replaces w by g in f. Needs integer w-exponents.
inline Expr substitute_w(const Expr& f, const Expr& g) {
    const auto& n = f.node();
    if (n.op == Expr::Op::mono) {
        if (n.pw == 0) return f;
        if (!is_integer(n.pw)) throw std::invalid_argument("substitute_w needs integer w-exponents");
        Expr out = Expr::mono(n.c, n.pu, 0);
        unsigned k = numerator(n.pw).convert_to<unsigned>();
        for (unsigned i = 0; i < k; ++i) out = out * g;
        return out;
    }
    std::vector<Expr> args;
    for (const auto& a : n.args) args.push_back(substitute_w(a, g));
    return Expr::make(n.op, std::move(args));
}

/// f composed with (u, w) -> (u, u^beta - w), which swaps the two boundary
/// arcs of the standard beta-triangle.
inline Expr compose_boundary_swap(const Expr& f, const Rational& beta) {
    return substitute_w(f, Expr::u(beta) - Expr::w());
}

inline Expr scaled(const Expr& f, const Rational& c) { return Expr::constant(c) * f; }

/// Largest w-exponent in a mono node, and whether all are integers.
inline bool has_integer_w_exponents(const Expr& f) {
    const auto& n = f.node();
    if (n.op == Expr::Op::mono) return is_integer(n.pw);
    return std::all_of(n.args.begin(), n.args.end(), [](const Expr& a) { return has_integer_w_exponents(a); });
}

/// Floating evaluation with a running absolute error bound, used by the
/// numerical oracles. Real is any floating type with std-style pow/abs.
template <class Real>
Real rational_to(const Rational& r) {
    if constexpr (std::is_floating_point_v<Real>) return to_double(r);
    else return Real(numerator(r)) / Real(denominator(r));
}

template <class Real>
struct Bounded {
    Real value;
    Real error;
};

template <class Real>
Bounded<Real> evaluate_bounded(const Expr& f, const Real& u, const Real& w, const Real& eps) {
    using std::abs;
    using std::pow;
    const auto& n = f.node();
    switch (n.op) {
    case Expr::Op::mono: {
        Real c = rational_to<Real>(n.c);
        Real v = c;
        if (n.pu != 0) v *= pow(u, rational_to<Real>(n.pu));
        if (n.pw != 0) {
            if (is_integer(n.pw)) {
                Real wp = 1;
                for (long k = numerator(n.pw).convert_to<long>(); k > 0; --k) wp *= w;
                v *= wp;
            } else {
                v *= pow(w, rational_to<Real>(n.pw));
            }
        }
        return {v, 8 * eps * abs(v)};
    }
    case Expr::Op::add:
    case Expr::Op::sub: {
        Bounded<Real> acc = evaluate_bounded(n.args[0], u, w, eps);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
            auto b = evaluate_bounded(n.args[i], u, w, eps);
            acc.value = n.op == Expr::Op::add ? acc.value + b.value : acc.value - b.value;
            acc.error = acc.error + b.error + eps * abs(acc.value);
        }
        return acc;
    }
    case Expr::Op::mul: {
        Bounded<Real> acc = evaluate_bounded(n.args[0], u, w, eps);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
            auto b = evaluate_bounded(n.args[i], u, w, eps);
            Real v = acc.value * b.value;
            acc.error = abs(acc.value) * b.error + abs(b.value) * acc.error + acc.error * b.error + eps * abs(v);
            acc.value = v;
        }
        return acc;
    }
    case Expr::Op::abs: {
        auto a = evaluate_bounded(n.args[0], u, w, eps);
        return {abs(a.value), a.error};
    }
    case Expr::Op::min:
    case Expr::Op::max: {
        Bounded<Real> acc = evaluate_bounded(n.args[0], u, w, eps);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
            auto b = evaluate_bounded(n.args[i], u, w, eps);
            bool take = n.op == Expr::Op::min ? b.value < acc.value : b.value > acc.value;
            Real err = acc.error > b.error ? acc.error : b.error;
            if (take) acc.value = b.value;
            acc.error = err;
        }
        return acc;
    }
    }
    throw std::logic_error("bad expression node");
}

inline double evaluate(const Expr& f, double u, double w) {
    return evaluate_bounded<double>(f, u, w, 1e-16).value;
}

}  // namespace lipgeo
