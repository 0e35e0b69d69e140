#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace driftbudget {

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Unbiased sample variance (n-1 denominator); needs at least two points.
inline double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 points");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// Linear-interpolation quantile (the common "type 7" rule): index h=(n-1)p,
// interpolate between the two order statistics around h.
inline double quantile(std::vector<double> v, double p) {
    if (v.empty()) throw std::invalid_argument("quantile: empty sample");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p must be in [0,1]");
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

// Inverse of the standard normal CDF: rational initial guess (Acklam's
// coefficients) plus one Halley step against erfc, accurate to ~1e-15.
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

// One-sided lower confidence limit of the mean at the given confidence level.
inline double lower_confidence_limit(double sample_mean, double sample_var, std::uint64_t trials,
                                     double confidence) {
    if (trials < 2) throw std::invalid_argument("lower_confidence_limit: need at least 2 trials");
    const double se = std::sqrt(sample_var / static_cast<double>(trials));
    return sample_mean - inverse_normal_cdf(confidence) * se;
}

// ---- Kolmogorov-Smirnov, two samples ----

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^(j-1) e^(-2 j^2 lambda^2).
inline double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 128; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

inline double ks_two_sample_pvalue(const std::vector<double>& a, const std::vector<double>& b) {
    const double d = ks_two_sample_statistic(a, b);
    const double ne = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                      static_cast<double>(a.size() + b.size());
    const double sq = std::sqrt(ne);
    return kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
}

// ---- chi-square, two samples over integer support ----

namespace detail {

inline double gamma_series_p(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_contfrac_q(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
inline double gammq(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_series_p(a, x);
    return detail::gamma_contfrac_q(a, x);
}

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double pvalue = 1.0;
    int bins = 0;
};

// Two-sample chi-square over a shared integer support. Cells are pooled left
// to right until each pooled cell holds a combined count of at least 10; the
// scaled statistic handles unequal sample sizes, and one degree of freedom is
// dropped when the totals are forced equal.
inline ChiSquareResult chi_square_two_sample(const std::vector<std::int64_t>& a,
                                             const std::vector<std::int64_t>& b,
                                             std::int64_t min_cell = 10) {
    if (a.empty() || b.empty()) throw std::invalid_argument("chi_square: empty sample");
    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> counts;
    for (std::int64_t v : a) counts[v].first += 1;
    for (std::int64_t v : b) counts[v].second += 1;

    std::vector<std::pair<double, double>> cells;
    double ca = 0.0, cb = 0.0;
    for (const auto& [value, pair] : counts) {
        (void)value;
        ca += static_cast<double>(pair.first);
        cb += static_cast<double>(pair.second);
        if (ca + cb >= static_cast<double>(min_cell)) {
            cells.emplace_back(ca, cb);
            ca = cb = 0.0;
        }
    }
    if (ca + cb > 0.0) {
        if (cells.empty()) cells.emplace_back(ca, cb);
        else {
            cells.back().first += ca;
            cells.back().second += cb;
        }
    }

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ra = std::sqrt(nb / na);
    const double rb = std::sqrt(na / nb);
    double chi2 = 0.0;
    for (const auto& [oa, ob] : cells) {
        const double diff = ra * oa - rb * ob;
        chi2 += diff * diff / (oa + ob);
    }
    ChiSquareResult r;
    r.statistic = chi2;
    r.bins = static_cast<int>(cells.size());
    r.dof = r.bins - (a.size() == b.size() ? 1 : 0);
    if (r.dof < 1) {
        r.dof = 0;
        r.pvalue = 1.0;
        return r;
    }
    r.pvalue = gammq(0.5 * static_cast<double>(r.dof), 0.5 * chi2);
    return r;
}

} // namespace driftbudget
