#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftbudget {

// One evaluated theorem right-hand side at budget t: either a lower bound on
// the expected fitness or a two-sided bracket. Every asymptotic term the
// formulas elide is pinned by a named constant recorded alongside the value.
struct BoundPrediction {
    enum class Kind { lower_bound, bracket };

    std::string theorem_id;
    std::uint64_t t = 0;
    Kind kind = Kind::lower_bound;
    double value = 0.0;               // lower_bound kind
    double lower = 0.0, upper = 0.0;  // bracket kind
    std::map<std::string, double> constants;
};

using ConstantMap = std::map<std::string, double>;

inline double constant_or(const ConstantMap& constants, const std::string& key, double dflt) {
    auto it = constants.find(key);
    return it == constants.end() ? dflt : it->second;
}

// Validity windows of the LeadingOnes bounds (natural logs throughout).
inline bool thm36_log_window_ok(int n, std::uint64_t t) {
    const double nn = static_cast<double>(n);
    return static_cast<double>(t) <= (M_E - 1.0) / 2.0 * nn * nn - std::pow(nn, 1.5);
}

inline bool thm43_window_ok(int n, std::uint64_t t) {
    const double nn = static_cast<double>(n);
    return static_cast<double>(t) <= (M_E - 1.0) / 2.0 * nn * nn - std::pow(nn, 1.5) * std::log(nn);
}

inline bool thm51_window_ok(int n, std::uint64_t t, double cprime = 1.0) {
    const double nn = static_cast<double>(n);
    const double tt = static_cast<double>(t);
    return tt >= 10.0 * nn * std::log(nn) &&
           tt <= (M_E - 1.0) / 2.0 * nn * nn - cprime * std::pow(nn, 1.5) * std::sqrt(std::log(nn));
}

// OneMax fitness lower bounds:
//   thm35_sqrt_e: n/2 + t/(2 sqrt(e)) - (slack_abs + slack_rel * t)
//   thm35_exp:    n (1 - exp(-t/(e n)) / 2)
inline std::vector<BoundPrediction> predict_onemax_fitness(int n, std::uint64_t t,
                                                           const ConstantMap& constants = {}) {
    if (n < 1) throw std::invalid_argument("predict_onemax_fitness: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double tt = static_cast<double>(t);
    const double slack_abs = constant_or(constants, "thm35_slack_abs", 2.0);
    const double slack_rel = constant_or(constants, "thm35_slack_rel", 0.0);

    BoundPrediction sqrt_e;
    sqrt_e.theorem_id = "thm35_sqrt_e";
    sqrt_e.t = t;
    sqrt_e.value = nn / 2.0 + tt / (2.0 * std::sqrt(M_E)) - (slack_abs + slack_rel * tt);
    sqrt_e.constants = {{"thm35_slack_abs", slack_abs}, {"thm35_slack_rel", slack_rel}};

    BoundPrediction exp_bound;
    exp_bound.theorem_id = "thm35_exp";
    exp_bound.t = t;
    exp_bound.value = nn * (1.0 - std::exp(-tt / (M_E * nn)) / 2.0);

    return {sqrt_e, exp_bound};
}

// LeadingOnes linear lower bound 2t/n - slack (valid for all t).
inline BoundPrediction predict_lo_linear(int n, std::uint64_t t,
                                         const ConstantMap& constants = {}) {
    if (n < 1) throw std::invalid_argument("predict_lo_linear: n must be >= 1");
    const double slack = constant_or(constants, "thm36_slack", 2.0);
    BoundPrediction p;
    p.theorem_id = "thm36_linear";
    p.t = t;
    p.value = 2.0 * static_cast<double>(t) / static_cast<double>(n) - slack;
    p.constants = {{"thm36_slack", slack}};
    return p;
}

// LeadingOnes logarithmic lower bound n ln(1 + 2t/n^2) - slack, valid up to
// t = (e-1)n^2/2 - n^(3/2).
inline BoundPrediction predict_lo_log(int n, std::uint64_t t, const ConstantMap& constants = {}) {
    if (n < 1) throw std::invalid_argument("predict_lo_log: n must be >= 1");
    if (!thm36_log_window_ok(n, t))
        throw std::invalid_argument("predict_lo_log: t outside the validity window");
    const double nn = static_cast<double>(n);
    const double slack = constant_or(constants, "thm36_slack", 2.0);
    BoundPrediction p;
    p.theorem_id = "thm36_log";
    p.t = t;
    p.value = nn * std::log1p(2.0 * static_cast<double>(t) / (nn * nn)) - slack;
    p.constants = {{"thm36_slack", slack}};
    return p;
}

inline std::vector<BoundPrediction> predict_lo_fitness(int n, std::uint64_t t,
                                                       const ConstantMap& constants = {}) {
    std::vector<BoundPrediction> out{predict_lo_linear(n, t, constants)};
    if (thm36_log_window_ok(n, t)) out.push_back(predict_lo_log(n, t, constants));
    return out;
}

// Additive-potential LeadingOnes bound 2t/(en) - slack, valid up to
// t = (e-1)n^2/2 - n^(3/2) ln n.
inline BoundPrediction predict_lo_additive(int n, std::uint64_t t,
                                           const ConstantMap& constants = {}) {
    if (n < 1) throw std::invalid_argument("predict_lo_additive: n must be >= 1");
    if (!thm43_window_ok(n, t))
        throw std::invalid_argument("predict_lo_additive: t outside the validity window");
    const double slack = constant_or(constants, "thm43_slack", 2.0);
    BoundPrediction p;
    p.theorem_id = "thm43_additive";
    p.t = t;
    p.value = 2.0 * static_cast<double>(t) / (M_E * static_cast<double>(n)) - slack;
    p.constants = {{"thm43_slack", slack}};
    return p;
}

// Raw evaluator of the bracket edge formula -n ln(1 - 2t/n^2 + eps), with no
// window checks (used for shape tests and the point column at eps = 0).
inline double lo_log_formula(int n, double t, double eps) {
    if (n < 1) throw std::invalid_argument("lo_log_formula: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double arg = 1.0 - 2.0 * t / (nn * nn) + eps;
    if (!(arg > 0.0)) throw std::domain_error("lo_log_formula: log argument not positive");
    return -nn * std::log(arg);
}

// High-probability fitness bracket at confidence 1 - 1/n^3:
//   eps = c sqrt(t ln n) / n^(3/2),
//   lower = -n ln(1 - 2t/n^2 + eps), upper = -n ln(1 - 2t/n^2 - eps),
// clamped to the codomain [0, n] with the raw values retained.
struct FitnessBracket {
    int n = 0;
    std::uint64_t t = 0;
    double c = 0.0;
    double lower = 0.0, upper = 0.0;
    double raw_lower = 0.0, raw_upper = 0.0;
    double confidence = 0.0;
};

inline FitnessBracket fitness_bracket(int n, std::uint64_t t, double c, double cprime = 1.0) {
    if (n < 2) throw std::invalid_argument("fitness_bracket: n must be >= 2");
    if (!(c >= 0.0)) throw std::invalid_argument("fitness_bracket: c must be >= 0");
    if (!thm51_window_ok(n, t, cprime))
        throw std::invalid_argument("fitness_bracket: t outside the validity window");
    const double nn = static_cast<double>(n);
    const double tt = static_cast<double>(t);
    const double eps = c * std::sqrt(tt * std::log(nn)) / std::pow(nn, 1.5);
    FitnessBracket b;
    b.n = n;
    b.t = t;
    b.c = c;
    b.raw_lower = lo_log_formula(n, tt, eps);
    b.raw_upper = lo_log_formula(n, tt, -eps);
    b.lower = std::min(std::max(b.raw_lower, 0.0), nn);
    b.upper = std::min(std::max(b.raw_upper, 0.0), nn);
    b.confidence = 1.0 - 1.0 / (nn * nn * nn);
    return b;
}

inline BoundPrediction to_prediction(const FitnessBracket& b) {
    BoundPrediction p;
    p.theorem_id = "thm51_bracket";
    p.t = b.t;
    p.kind = BoundPrediction::Kind::bracket;
    p.lower = b.lower;
    p.upper = b.upper;
    p.constants = {{"thm51_c", b.c}, {"confidence", b.confidence}};
    return p;
}

} // namespace driftbudget
