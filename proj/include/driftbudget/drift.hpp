#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "driftbudget/lo_exact.hpp"

namespace driftbudget {

// Lower bound h on the one-step expected decrease of the fitness distance,
// defined on real x in [0, n]. The derivative is optional; when present it is
// cross-checked against a finite difference before use.
struct DriftFunction {
    std::string name;
    int n = 0;
    std::function<double(double)> value;
    std::function<double(double)> derivative; // may be empty

    double operator()(double x) const {
        if (!(x >= 0.0) || x > static_cast<double>(n))
            throw std::domain_error("DriftFunction: x outside [0,n]");
        return value(x);
    }
};

// h(x) = (1-1/n)^(n-x) x / n. Lower-bounds the OneMax distance drift: it
// keeps only the event that no one-bit is lost while x zero-bits each flip
// back with probability 1/n.
inline DriftFunction h_onemax(int n) {
    if (n < 1) throw std::invalid_argument("h_onemax: n must be >= 1");
    const double q = 1.0 - 1.0 / n;
    const double lq = std::log1p(-1.0 / n);
    DriftFunction h;
    h.name = "onemax";
    h.n = n;
    h.value = [n, q](double x) { return std::pow(q, n - x) * x / n; };
    h.derivative = [n, q, lq](double x) {
        return std::pow(q, n - x) * (1.0 - x * lq) / n;
    };
    return h;
}

// h(x) = (1-1/n)^(n-x) 2/n. Drift lower bound for the boundary-adjusted
// LeadingOnes distance: with the optimum revalued one higher, an improving
// step gains at least 2 in expectation from every state, while the tracked
// value differs from the plain distance by at most 1. Unlike the exact drift
// (below) this one is convex.
inline DriftFunction h_leadingones(int n) {
    if (n < 1) throw std::invalid_argument("h_leadingones: n must be >= 1");
    const double q = 1.0 - 1.0 / n;
    const double lq = std::log1p(-1.0 / n);
    DriftFunction h;
    h.name = "leadingones";
    h.n = n;
    h.value = [n, q](double x) { return std::pow(q, n - x) * 2.0 / n; };
    h.derivative = [n, q, lq](double x) {
        return -std::pow(q, n - x) * 2.0 * lq / n;
    };
    return h;
}

// Exact LeadingOnes distance drift extended to real x by its formula.
inline DriftFunction exact_lo_drift_function(int n) {
    if (n < 1) throw std::invalid_argument("exact_lo_drift_function: n must be >= 1");
    const double q = 1.0 - 1.0 / n;
    DriftFunction h;
    h.name = "leadingones-exact";
    h.n = n;
    h.value = [n, q](double x) {
        return (2.0 - std::exp2(1.0 - x)) * std::pow(q, n - x) / n;
    };
    return h;
}

struct PremiseReport {
    std::string name;
    bool greed_admitting = false;
    bool convex = false;
    double grid_step = 0.0;
    double tolerance = 0.0;
    double worst_monotone_gap = 0.0; // largest decrease of x - h(x) seen
    double worst_convex_gap = 0.0;   // most negative second difference seen
};

namespace detail {

inline PremiseReport check_premises_on_grid(const std::string& name,
                                            const std::vector<double>& xs,
                                            const std::vector<double>& hs, double grid_step,
                                            double tol) {
    PremiseReport r;
    r.name = name;
    r.grid_step = grid_step;
    r.tolerance = tol;
    for (std::size_t k = 1; k < xs.size(); ++k) {
        const double gap = (xs[k - 1] - hs[k - 1]) - (xs[k] - hs[k]);
        if (gap > r.worst_monotone_gap) r.worst_monotone_gap = gap;
    }
    for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
        const double second = hs[k - 1] + hs[k + 1] - 2.0 * hs[k];
        if (-second > r.worst_convex_gap) r.worst_convex_gap = -second;
    }
    r.greed_admitting = r.worst_monotone_gap <= tol;
    r.convex = r.worst_convex_gap <= tol;
    return r;
}

} // namespace detail

// Checks the two premises of the iterate machinery on an equispaced grid:
// x - h(x) non-decreasing (greed-admitting) and h convex.
inline PremiseReport check_premises(const DriftFunction& h, double grid_step = 1.0,
                                    double tol = 1e-12) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("check_premises: grid_step must be > 0");
    std::vector<double> xs, hs;
    const double nn = static_cast<double>(h.n);
    for (double x = 0.0; x < nn + grid_step / 2.0; x += grid_step) {
        const double xc = std::min(x, nn);
        xs.push_back(xc);
        hs.push_back(h(xc));
        if (xc >= nn) break;
    }
    return detail::check_premises_on_grid(h.name, xs, hs, grid_step, tol);
}

// Same checks for a drift tabulated on integer states 0..n.
inline PremiseReport check_premises(const std::vector<double>& h_at_states, double tol = 1e-12,
                                    const std::string& name = "table") {
    if (h_at_states.size() < 2)
        throw std::invalid_argument("check_premises: need at least two states");
    std::vector<double> xs(h_at_states.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
    return detail::check_premises_on_grid(name, xs, h_at_states, 1.0, tol);
}

// Derivative of h at x: analytic when available (validated against a finite
// difference), otherwise the finite difference alone. Central differences
// inside the domain, one-sided second-order stencils at the ends.
inline double drift_derivative(const DriftFunction& h, double x, double agree_tol = 1e-6) {
    const double nn = static_cast<double>(h.n);
    const double s = std::max(1e-6 * nn, 1e-9);
    double numeric;
    if (x - s < 0.0)
        numeric = (-3.0 * h(x) + 4.0 * h(x + s) - h(x + 2.0 * s)) / (2.0 * s);
    else if (x + s > nn)
        numeric = (3.0 * h(x) - 4.0 * h(x - s) + h(x - 2.0 * s)) / (2.0 * s);
    else
        numeric = (h(x + s) - h(x - s)) / (2.0 * s);
    if (!h.derivative) return numeric;
    const double analytic = h.derivative(x);
    if (std::fabs(analytic - numeric) > agree_tol * std::max(1.0, std::fabs(analytic)))
        throw std::logic_error("drift_derivative: analytic and numeric derivatives disagree");
    return analytic;
}

// t-fold iterate of x -> x - h(x), clamped at zero. For a greed-admitting h
// bounded by x the iterate stays in [0, x0] and is non-increasing in t.
// Unclamped, the first value below zero is returned as is: h is undefined
// there, so the recursion cannot be continued past it.
inline double iterate_tilde(const DriftFunction& h, double x0, std::uint64_t t,
                            bool clamp = true) {
    if (!(x0 >= 0.0) || x0 > static_cast<double>(h.n))
        throw std::invalid_argument("iterate_tilde: x0 outside [0,n]");
    double x = x0;
    for (std::uint64_t s = 0; s < t; ++s) {
        x -= h(x);
        if (x < 0.0) {
            if (!clamp) return x;
            x = 0.0;
        }
    }
    return x;
}

// Iterate bound sharpened by the hitting probability:
//   E[X_t] <= htilde^t(x0) - (htilde(0) / htilde'(0)) * p_hit,
// where htilde(0) = -h(0) and htilde'(0) = 1 - h'(0) must lie in (0, 1].
inline double limited_time_bound(const DriftFunction& h, double x0, std::uint64_t t,
                                 double p_hit) {
    if (!(p_hit >= 0.0) || p_hit > 1.0)
        throw std::invalid_argument("limited_time_bound: p_hit must be in [0,1]");
    const double ht0 = -h(0.0);
    const double htp0 = 1.0 - drift_derivative(h, 0.0);
    if (!(htp0 > 0.0) || htp0 > 1.0)
        throw std::domain_error("limited_time_bound: htilde'(0) must be in (0,1]");
    return iterate_tilde(h, x0, t) - (ht0 / htp0) * p_hit;
}

// Budget sufficient to drive the iterate from n down to m:
//   sum_{i=m}^{n-1} 1/h(i). Signals when h vanishes on the range (then no
// finite budget exists).
inline double budget_sum(const DriftFunction& h, int m, int n) {
    if (n != h.n) throw std::invalid_argument("budget_sum: n does not match the drift function");
    if (m < 0 || m >= n) throw std::invalid_argument("budget_sum: m must be in [0,n)");
    double s = 0.0;
    for (int i = m; i < n; ++i) {
        const double hi = h(static_cast<double>(i));
        if (!(hi > 0.0)) throw std::domain_error("budget_sum: h is not positive on [m,n)");
        s += 1.0 / hi;
    }
    return s;
}

} // namespace driftbudget
