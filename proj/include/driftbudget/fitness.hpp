#pragma once

#include <stdexcept>
#include <string>

#include "driftbudget/bitstring.hpp"

namespace driftbudget {

enum class Problem { one_max, leading_ones };

inline std::string problem_name(Problem p) {
    return p == Problem::one_max ? "onemax" : "leadingones";
}

inline Problem problem_from_name(const std::string& name) {
    if (name == "onemax") return Problem::one_max;
    if (name == "leadingones") return Problem::leading_ones;
    throw std::invalid_argument("unknown problem: " + name);
}

inline int one_max(const BitString& x) {
    int s = 0;
    for (int i = 0; i < x.size(); ++i) s += x.test(i) ? 1 : 0;
    return s;
}

inline int leading_ones(const BitString& x) {
    int v = 0;
    while (v < x.size() && x.test(v)) ++v;
    return v;
}

// LeadingOnes with the all-ones string revalued to n+1. Under this fitness an
// improving step gains at least 2 in expectation from every non-optimal state,
// which is what makes the smooth factor-2 drift bound valid. Analysis only;
// the EA itself always selects on the plain fitness.
inline int adjusted_lo(const BitString& x) {
    const int v = leading_ones(x);
    return v == x.size() ? v + 1 : v;
}

inline int evaluate(Problem p, const BitString& x) {
    return p == Problem::one_max ? one_max(x) : leading_ones(x);
}

} // namespace driftbudget
