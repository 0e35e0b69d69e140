#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "driftbudget/gain.hpp"
#include "driftbudget/lo_exact.hpp"
#include "driftbudget/potential.hpp"

namespace driftbudget {

// Parameters of the two-branch martingale-difference tail bound: per-step
// variance proxies summed into nu_sq_sum, with the increments' upper range
// split at b2 (b1 may be infinite).
struct TailBoundParams {
    double b1 = std::numeric_limits<double>::infinity();
    double b2 = 1.0;
    double nu_sq_sum = 0.0;
};

// P(Y_t - Y_0 >= d) <=
//   exp(-d / (2 b2))        if d >= nu_sq_sum / b2,
//   exp(-d^2 / (2 nu_sq_sum)) if nu_sq_sum / b1 <= d < nu_sq_sum / b2.
// Below nu_sq_sum / b1 the bound does not apply and the call is rejected
// rather than guessed. The two branches agree at the split.
inline double martingale_tail(double d, const TailBoundParams& p) {
    if (!(p.b2 > 0.0) || !(p.b1 > p.b2))
        throw std::invalid_argument("martingale_tail: need 0 < b2 < b1");
    if (!(p.nu_sq_sum >= 0.0))
        throw std::invalid_argument("martingale_tail: nu_sq_sum must be >= 0");
    if (!(d >= 0.0)) throw std::invalid_argument("martingale_tail: d must be >= 0");
    const double low = std::isinf(p.b1) ? 0.0 : p.nu_sq_sum / p.b1;
    if (d < low) throw std::domain_error("martingale_tail: d below the validity threshold");
    double bound;
    if (d >= p.nu_sq_sum / p.b2) bound = std::exp(-d / (2.0 * p.b2));
    else bound = std::exp(-d * d / (2.0 * p.nu_sq_sum));
    return std::min(1.0, bound);
}

// Log-spaced grid spanning the range [1/n^2, 1/(2en)] where the mgf bound holds.
inline std::vector<double> default_lambda_grid(int n, int points = 33) {
    if (n < 2) throw std::invalid_argument("default_lambda_grid: n must be >= 2");
    if (points < 2) throw std::invalid_argument("default_lambda_grid: need >= 2 points");
    const double lo = std::log(1.0 / (static_cast<double>(n) * n));
    const double hi = std::log(1.0 / (2.0 * M_E * n));
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k)
        grid[static_cast<std::size_t>(k)] =
            std::exp(lo + (hi - lo) * k / static_cast<double>(points - 1));
    return grid;
}

// Exact verification of the potential-increment mgf bound. For each
// non-optimal state i of the LeadingOnes process, the compensated increment
//   D = g(X') - g(i) + 1 + r
// (g the discrete potential of the exact drift) has
//   E[e^(lambda D) | X = i]
//     = (1 - p_i) e^(lambda (1 + r)) + p_i sum_j P(G=j) e^(lambda (g(i-j) - g(i) + 1 + r)),
// computed term by term. Returns the smallest c with log E <= c lambda^2 n
// over all states and all grid lambdas; lambda = 0 entries are vacuous and
// skipped, lambdas beyond 1/(2en) are outside the bound's range and rejected.
inline double verify_mgf_drift_bound(int n, const std::vector<double>& lambda_grid,
                                     double r = 0.0) {
    if (n < 2) throw std::invalid_argument("verify_mgf_drift_bound: n must be >= 2");
    if (!(r >= 0.0)) throw std::invalid_argument("verify_mgf_drift_bound: r must be >= 0");
    const double lambda_max = 1.0 / (2.0 * M_E * n) * (1.0 + 1e-12);
    for (double lam : lambda_grid)
        if (!(lam >= 0.0) || lam > lambda_max)
            throw std::invalid_argument("verify_mgf_drift_bound: lambda outside [0, 1/(2en)]");

    DriftFunction h = exact_lo_drift_function(n);
    const PotentialTable g = build_potential(h, 1.0, n, PotentialSource::discrete_sum);

    double c = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n; ++i) {
        const double p = lo_improvement_prob(n, i);
        const GainPmf pmf = gain_pmf(i);
        for (double lam : lambda_grid) {
            if (lam == 0.0) continue;
            double m = (1.0 - p) * std::exp(lam * (1.0 + r));
            for (int j = 1; j <= i; ++j)
                m += p * pmf.prob[static_cast<std::size_t>(j) - 1] *
                     std::exp(lam * (g(i - j) - g(i) + 1.0 + r));
            const double ratio = std::log(m) / (lam * lam * static_cast<double>(n));
            if (ratio > c) c = ratio;
        }
    }
    if (std::isinf(c))
        throw std::invalid_argument("verify_mgf_drift_bound: grid has no positive lambda");
    return c;
}

// Bracket-width constant derived from the calibrated mgf constant: with the
// per-step variance proxy nu^2 = 2 c_mgf n, the Gaussian branch of
// martingale_tail at confidence 1 - 1/n^3 gives a deviation
// d* = sqrt(6 c_mgf * 2 n t ln n), and the induced half-width 2 d*/n^2 equals
// c sqrt(t ln n)/n^(3/2) with c = 4 sqrt(3 c_mgf).
inline double calibrated_bracket_constant(double c_mgf) {
    if (!(c_mgf > 0.0))
        throw std::invalid_argument("calibrated_bracket_constant: c_mgf must be positive");
    return 4.0 * std::sqrt(3.0 * c_mgf);
}

} // namespace driftbudget
