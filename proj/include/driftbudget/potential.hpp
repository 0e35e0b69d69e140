#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftbudget/drift.hpp"
#include "driftbudget/gain.hpp"
#include "driftbudget/lo_exact.hpp"

namespace driftbudget {

enum class PotentialSource { integral, discrete_sum };

// Potential g tabulated on the integer states 0..n. States below xmin carry
// g = 0; from xmin on, g is strictly increasing.
struct PotentialTable {
    int n = 0;
    double xmin = 1.0;
    PotentialSource source = PotentialSource::discrete_sum;
    std::vector<double> values; // values[a] = g(a), a = 0..n

    double operator()(int a) const {
        if (a < 0 || a > n) throw std::out_of_range("PotentialTable: state out of range");
        return values[static_cast<std::size_t>(a)];
    }
};

// Survival probabilities P(s < T) for s = 0..t-1, with their provenance
// ("empirical" or "djwz-lower-bound") recorded for reports.
struct SurvivalCurve {
    std::vector<double> probs;
    std::string source;

    double sum() const {
        double s = 0.0;
        for (double p : probs) s += p;
        return s;
    }
};

namespace detail {

// Composite Simpson integral of 1/h over [a, b] with subintervals scaled to
// the interval length (at least 2, forced even).
inline double simpson_inv_h(const DriftFunction& h, double a, double b, int per_unit) {
    if (b <= a) return 0.0;
    int segments = static_cast<int>(std::ceil((b - a) * per_unit));
    segments = std::max(segments, 2);
    if (segments % 2 != 0) ++segments;
    const double step = (b - a) / segments;
    double s = 1.0 / h(a) + 1.0 / h(b);
    for (int k = 1; k < segments; ++k) {
        const double z = a + step * k;
        s += (k % 2 == 1 ? 4.0 : 2.0) / h(z);
    }
    return s * step / 3.0;
}

} // namespace detail

// Builds the potential from a drift bound h:
//   integral mode:     g(x) = xmin/h(xmin) + integral_{xmin}^{x} 1/h(z) dz,
//   discrete-sum mode: g(a) = sum_{i=1}^{a} 1/h(i)   (integer states, xmin = 1),
// and g = 0 below xmin. Requires h positive and non-decreasing on the covered
// states (checked on the integer grid).
inline PotentialTable build_potential(const DriftFunction& h, double xmin, int n,
                                      PotentialSource mode, int simpson_per_unit = 10) {
    if (n != h.n) throw std::invalid_argument("build_potential: n does not match drift function");
    if (!(xmin > 0.0) || xmin > static_cast<double>(n))
        throw std::invalid_argument("build_potential: xmin must be in (0, n]");
    if (mode == PotentialSource::discrete_sum && xmin != 1.0)
        throw std::invalid_argument("build_potential: discrete-sum mode requires xmin = 1");

    const int first = static_cast<int>(std::ceil(xmin));
    for (int i = first; i < n; ++i) {
        const double lo = h(static_cast<double>(i));
        const double hi = h(static_cast<double>(i + 1));
        if (!(lo > 0.0) || !(hi > 0.0))
            throw std::domain_error("build_potential: h must be positive on [xmin, n]");
        if (hi < lo * (1.0 - 1e-12))
            throw std::domain_error("build_potential: h must be non-decreasing on [xmin, n]");
    }

    PotentialTable g;
    g.n = n;
    g.xmin = xmin;
    g.source = mode;
    g.values.assign(static_cast<std::size_t>(n) + 1, 0.0);

    if (mode == PotentialSource::discrete_sum) {
        double acc = 0.0;
        for (int a = 1; a <= n; ++a) {
            acc += 1.0 / h(static_cast<double>(a));
            g.values[static_cast<std::size_t>(a)] = acc;
        }
    } else {
        double acc = xmin / h(xmin) +
                     detail::simpson_inv_h(h, xmin, static_cast<double>(first), simpson_per_unit);
        g.values[static_cast<std::size_t>(first)] = acc;
        for (int a = first + 1; a <= n; ++a) {
            acc += detail::simpson_inv_h(h, static_cast<double>(a - 1), static_cast<double>(a),
                                         simpson_per_unit);
            g.values[static_cast<std::size_t>(a)] = acc;
        }
    }

    for (int a = std::max(first, 1); a < n; ++a)
        if (!(g.values[static_cast<std::size_t>(a) + 1] > g.values[static_cast<std::size_t>(a)]))
            throw std::logic_error("build_potential: table failed to come out increasing");
    return g;
}

// E[g(X_t)] <= g(x0) - sum_{s<t} P(s < T).
inline double expected_g_upper_bound(const PotentialTable& g, int x0,
                                     const SurvivalCurve& survival) {
    return g(x0) - survival.sum();
}

// Additive special case: E[X_t] <= x0 - delta * sum_{s<t} P(s < T).
inline double additive_bound(double x0, double delta, const SurvivalCurve& survival) {
    if (!(delta > 0.0)) throw std::invalid_argument("additive_bound: delta must be positive");
    return x0 - delta * survival.sum();
}

// Smallest integer state a with g(a) >= y; y must lie in [0, g(n)].
inline int invert_potential(const PotentialTable& g, double y) {
    if (!(y >= 0.0) || y > g(g.n)) throw std::invalid_argument("invert_potential: y out of range");
    int lo = 0, hi = g.n;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (g(mid) >= y) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

// Closed-form estimates for the discrete LeadingOnes potential at state a:
//   first:  (e n^2 / 2)(1 - (1-1/n)^a) - 3 n ln n
//   second: (n/2)(n-1)(1-1/n)^(-n) (1 - (1-1/n)^a).
// The first is a genuine lower bound. The second, despite its intended role
// as the matching upper estimate, is itself a lower estimate: term-wise it
// replaces 1/(2 - 2^(1-i)) by 1/2, so the true g exceeds it by an O(n) term
// (empirically below e*n). Both are returned as-is in the (lower, upper)
// slots; consumers needing a true ceiling should use the second value plus
// e*n.
inline std::pair<double, double> g_closed_form_bounds(int n, int a) {
    if (n < 2) throw std::invalid_argument("g_closed_form_bounds: n must be >= 2");
    if (a < 0 || a > n) throw std::invalid_argument("g_closed_form_bounds: a must be in [0,n]");
    const double nn = static_cast<double>(n);
    const double decay = 1.0 - std::pow(1.0 - 1.0 / nn, static_cast<double>(a));
    const double lower = M_E * nn * nn / 2.0 * decay - 3.0 * nn * std::log(nn);
    const double upper = nn / 2.0 * (nn - 1.0) * std::pow(1.0 - 1.0 / nn, -nn) * decay;
    if (lower > upper)
        throw std::invalid_argument("g_closed_form_bounds: n too small, estimates cross");
    return {lower, upper};
}

// Analytic survival lower bound assembled from the optimization-time tail:
// P(s < T) >= 1 - P(T <= s) >= 1 - P(|T - E[T]| >= E[T] - s), with the
// deviation clamped to the tail bound's domain [0, 2n^2] and the result
// floored at 0.
inline SurvivalCurve survival_from_djwz(int n, std::uint64_t t) {
    const double et = expected_opt_time_lo(n);
    if (static_cast<double>(t) > et)
        throw std::invalid_argument("survival_from_djwz: t must not exceed the expected time");
    SurvivalCurve curve;
    curve.source = "djwz-lower-bound";
    curve.probs.resize(t);
    const double dmax = 2.0 * static_cast<double>(n) * static_cast<double>(n);
    for (std::uint64_t s = 0; s < t; ++s) {
        const double d = std::min(et - static_cast<double>(s), dmax);
        curve.probs[s] = std::max(0.0, 1.0 - djwz_tail(n, d));
    }
    return curve;
}

// Exact drift of the discrete LeadingOnes potential, per state. Entry i is
//   P(improve | X=i) * sum_j P(G=j) (g(i) - g(i-j)),
// with entry 0 fixed at 0. The construction makes this >= 1 everywhere, with
// equality at state 1.
inline std::vector<double> g_drift_exact(int n) {
    DriftFunction h = exact_lo_drift_function(n);
    const PotentialTable g = build_potential(h, 1.0, n, PotentialSource::discrete_sum);
    std::vector<double> drift(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        const GainPmf pmf = gain_pmf(i);
        double s = 0.0;
        for (int j = 1; j <= i; ++j)
            s += pmf.prob[static_cast<std::size_t>(j) - 1] * (g(i) - g(i - j));
        drift[static_cast<std::size_t>(i)] = lo_improvement_prob(n, i) * s;
    }
    return drift;
}

} // namespace driftbudget
