#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "driftbudget/rng.hpp"

namespace driftbudget {

// Distribution of the LeadingOnes distance decrease in an improving step,
// at fitness distance x >= 1: P(G = i) = 2^-i for 1 <= i < x, and the whole
// remaining mass P(G = x) = 2^-(x-1) on the full jump.
struct GainPmf {
    int x = 0;
    std::vector<double> prob; // prob[i-1] = P(G = i)

    double mean() const {
        double s = 0.0;
        for (int i = static_cast<int>(prob.size()); i >= 1; --i)
            s += static_cast<double>(i) * prob[static_cast<std::size_t>(i) - 1];
        return s;
    }

    double closed_form_mean() const { return 2.0 - std::ldexp(1.0, 1 - x); }
};

inline GainPmf gain_pmf(int x) {
    if (x < 1) throw std::invalid_argument("gain_pmf: x must be >= 1");
    GainPmf g;
    g.x = x;
    g.prob.resize(static_cast<std::size_t>(x));
    for (int i = 1; i < x; ++i) g.prob[static_cast<std::size_t>(i) - 1] = std::ldexp(1.0, -i);
    g.prob[static_cast<std::size_t>(x) - 1] = std::ldexp(1.0, -(x - 1));
    return g;
}

// Exact dyadic form for x <= 63: numerators over the common denominator
// 2^(x-1). They sum to exactly 2^(x-1), so the pmf is exact in integers.
inline std::vector<std::uint64_t> gain_pmf_dyadic(int x) {
    if (x < 1 || x > 63) throw std::invalid_argument("gain_pmf_dyadic: x must be in [1,63]");
    std::vector<std::uint64_t> num(static_cast<std::size_t>(x));
    for (int i = 1; i < x; ++i)
        num[static_cast<std::size_t>(i) - 1] = std::uint64_t{1} << (x - 1 - i);
    num[static_cast<std::size_t>(x) - 1] = 1;
    return num;
}

// Moment generating function E[e^(eta G)] by direct summation.
inline double gain_mgf_brute(int x, double eta) {
    if (x < 1) throw std::invalid_argument("gain_mgf_brute: x must be >= 1");
    double s = 0.0;
    for (int i = 1; i < x; ++i) s += std::exp(eta * i) * std::ldexp(1.0, -i);
    s += std::exp(eta * x) * std::ldexp(1.0, -(x - 1));
    return s;
}

// Closed form of the same finite sum:
//   ((e^eta/2)^x (1 - e^eta) + e^eta/2) / (1 - e^eta/2).
// The identity holds for every eta with e^eta != 2; the apparent pole at
// eta = ln 2 is a removable artifact of the geometric-sum rearrangement,
// and evaluation too close to it is rejected as numerically meaningless.
inline double gain_mgf(int x, double eta) {
    if (x < 1) throw std::invalid_argument("gain_mgf: x must be >= 1");
    const double e = std::exp(eta);
    const double denom = 1.0 - e / 2.0;
    if (std::fabs(denom) < 1e-9)
        throw std::domain_error("gain_mgf: eta too close to ln 2");
    const double half_pow = std::pow(e / 2.0, x);
    return (half_pow * (1.0 - e) + e / 2.0) / denom;
}

// Draw from the gain pmf: a geometric(1/2) waiting time truncated at x.
inline int sample_gain(RngStream& rng, int x) {
    if (x < 1) throw std::invalid_argument("sample_gain: x must be >= 1");
    const int w = 1 + rng.geometric_half_failures();
    return w < x ? w : x;
}

} // namespace driftbudget
