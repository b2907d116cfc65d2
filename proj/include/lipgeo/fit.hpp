#pragma once

#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lipgeo {

struct OrderEstimate {
    double exponent = 0;
    double residual = 0;  ///< RMS deviation of log(value) from the fitted line
};

/// Least-squares line through (x, y); slope and RMS residual.
inline OrderEstimate linear_fit(const std::vector<std::pair<double, double>>& pts) {
    const double n = static_cast<double>(pts.size());
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    OrderEstimate e;
    e.exponent = sxy / sxx;
    double ss = 0;
    for (const auto& [x, y] : pts) {
        double r = y - (my + e.exponent * (x - mx));
        ss += r * r;
    }
    e.residual = std::sqrt(ss / n);
    return e;
}

/// Least-squares slope of log(value) against log(t).
inline OrderEstimate estimate_order(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 4) throw std::invalid_argument("estimate_order needs at least 4 samples");
    std::set<double> ts;
    std::vector<std::pair<double, double>> logs;
    for (const auto& [t, v] : samples) {
        if (!(t > 0) || !(v > 0) || !std::isfinite(v)) throw std::domain_error("estimate_order needs positive samples");
        ts.insert(t);
        logs.emplace_back(std::log(t), std::log(v));
    }
    if (ts.size() != samples.size()) throw std::invalid_argument("estimate_order needs distinct t");
    return linear_fit(logs);
}

/// t_k = 2^-(a + k (b - a) / (levels - 1)), from coarse to fine.
inline std::vector<double> geometric_levels(double log2_max, double log2_min, int levels) {
    if (levels < 2) throw std::invalid_argument("need at least 2 levels");
    std::vector<double> out;
    for (int k = 0; k < levels; ++k)
        out.push_back(std::exp2(log2_max + (log2_min - log2_max) * k / (levels - 1)));
    return out;
}

}  // namespace lipgeo
