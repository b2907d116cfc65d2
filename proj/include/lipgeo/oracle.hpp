#pragma once

// Brute-force numerical order of f along an arc w = w(u), independent of the
// series machinery: high-precision evaluation with running error bounds and
// a log-log fit over tiny scales.

#include "lipgeo/expr.hpp"
#include "lipgeo/fit.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <vector>

namespace lipgeo {

struct NumericOrder {
    bool infinite = false;  ///< zero within the error bound at every level
    OrderEstimate fit;
};

/// Orders up to about 20 are resolved; levels are t = 2^-40 .. 2^-120.
inline NumericOrder numeric_order_on_arc(const Expr& f, const Series& w, int levels = 6) {
    using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<600>>;
    const Real eps = pow(Real(2), -1900);
    std::vector<std::pair<double, double>> samples;
    int zero_levels = 0;
    for (int k = 0; k < levels; ++k) {
        int e = -40 - 80 * k / (levels - 1);
        Real t = pow(Real(2), e);
        Real wt = 0;
        for (const auto& term : w.terms()) wt += rational_to<Real>(term.coeff) * pow(t, rational_to<Real>(term.exp));
        auto b = evaluate_bounded<Real>(f, t, wt, eps);
        Real mag = abs(b.value);
        if (mag <= b.error) {
            ++zero_levels;
            continue;
        }
        // log2 of the value, kept in double range by working with exponents.
        double lg = static_cast<double>(log2(mag));
        samples.emplace_back(static_cast<double>(e), lg);
    }
    NumericOrder out;
    if (zero_levels == levels) {
        out.infinite = true;
        return out;
    }
    if (zero_levels > 0 || samples.size() < 4) {
        out.fit.exponent = -1;
        out.fit.residual = 1e300;
        return out;
    }
    out.fit = linear_fit(samples);
    return out;
}

}  // namespace lipgeo
