#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftbudget {

// Exact per-iteration quantities for the (1+1) process on LeadingOnes,
// parameterized by the fitness distance x = n - LO(parent).

// Probability that an iteration improves the fitness: the frontier bit flips
// and nothing left of it does.
inline double lo_improvement_prob(int n, int x) {
    if (n < 1) throw std::invalid_argument("lo_improvement_prob: n must be >= 1");
    if (x < 1 || x > n) throw std::invalid_argument("lo_improvement_prob: x must be in [1,n]");
    return std::pow(1.0 - 1.0 / n, n - x) / n;
}

// Exact one-step distance drift E[X - X' | X = x]; zero at the optimum.
inline double exact_lo_drift(int n, int x) {
    if (n < 1) throw std::invalid_argument("exact_lo_drift: n must be >= 1");
    if (x < 0 || x > n) throw std::invalid_argument("exact_lo_drift: x must be in [0,n]");
    if (x == 0) return 0.0;
    return (2.0 - std::ldexp(1.0, 1 - x)) * lo_improvement_prob(n, x);
}

// Upper bound on the probability of a distance decrease by exactly j:
// P(X' = x - j) <= (1/n) (1/2)^(j-1).
inline double lo_jump_prob_bound(int n, int j) {
    if (n < 1) throw std::invalid_argument("lo_jump_prob_bound: n must be >= 1");
    if (j < 1) throw std::invalid_argument("lo_jump_prob_bound: j must be >= 1");
    return std::ldexp(1.0, -(j - 1)) / n;
}

// Exact expected optimization time on LeadingOnes:
//   ((n^2 - n) / 2) ((1 + 1/(n-1))^n - 1).
inline double expected_opt_time_lo(int n) {
    if (n < 2) throw std::invalid_argument("expected_opt_time_lo: n must be >= 2");
    const double nn = static_cast<double>(n);
    return (nn * nn - nn) / 2.0 * (std::pow(1.0 + 1.0 / (nn - 1.0), nn) - 1.0);
}

// Tail bound on the LeadingOnes optimization time:
//   P(|T - E[T]| >= d) <= 4 exp(-d^2 / (20 e^2 n^3)), capped at 1.
// The guarantee behind the formula covers deviations d <= 2n^2; this is a
// plain evaluator, so callers composing it into probability statements clamp
// d to that domain themselves (survival_from_djwz does).
inline double djwz_tail(int n, double d) {
    if (n < 1) throw std::invalid_argument("djwz_tail: n must be >= 1");
    if (!(d >= 0.0)) throw std::invalid_argument("djwz_tail: d must be >= 0");
    const double nn = static_cast<double>(n);
    const double e2 = std::exp(2.0);
    const double bound = 4.0 * std::exp(-d * d / (20.0 * e2 * nn * nn * nn));
    return std::min(1.0, bound);
}

} // namespace driftbudget
