#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "driftbudget/gain.hpp"
#include "driftbudget/rng.hpp"
#include "driftbudget/tail.hpp"

namespace db = driftbudget;

TEST(GainLaw, PmfSmallCases) {
    const auto p1 = db::gain_pmf(1);
    ASSERT_EQ(p1.prob.size(), 1u);
    EXPECT_DOUBLE_EQ(p1.prob[0], 1.0);
    EXPECT_DOUBLE_EQ(p1.mean(), 1.0);

    const auto p3 = db::gain_pmf(3);
    ASSERT_EQ(p3.prob.size(), 3u);
    EXPECT_DOUBLE_EQ(p3.prob[0], 0.5);
    EXPECT_DOUBLE_EQ(p3.prob[1], 0.25);
    EXPECT_DOUBLE_EQ(p3.prob[2], 0.25); // top atom absorbs the tail
    EXPECT_DOUBLE_EQ(p3.closed_form_mean(), 2.0 - 0.25);

    EXPECT_THROW(db::gain_pmf(0), std::invalid_argument);
}

TEST(GainLaw, MeanMatchesClosedForm) {
    for (int x = 1; x <= 60; ++x) {
        const auto pmf = db::gain_pmf(x);
        const double total = std::accumulate(pmf.prob.begin(), pmf.prob.end(), 0.0);
        EXPECT_NEAR(total, 1.0, 1e-15) << "x=" << x;
        EXPECT_NEAR(pmf.mean(), pmf.closed_form_mean(), 1e-13) << "x=" << x;
    }
}

TEST(GainLaw, DyadicPmfIsExact) {
    for (int x = 1; x <= 63; ++x) {
        const auto nums = db::gain_pmf_dyadic(x);
        ASSERT_EQ(nums.size(), static_cast<std::size_t>(x));
        const std::uint64_t denom = std::uint64_t{1} << (x - 1);
        std::uint64_t total = 0;
        for (std::uint64_t v : nums) total += v;
        EXPECT_EQ(total, denom) << "x=" << x;
        if (x <= 60) {
            const auto pmf = db::gain_pmf(x);
            for (int i = 0; i < x; ++i)
                EXPECT_DOUBLE_EQ(static_cast<double>(nums[static_cast<std::size_t>(i)]) /
                                     static_cast<double>(denom),
                                 pmf.prob[static_cast<std::size_t>(i)])
                    << "x=" << x << " i=" << i;
        }
    }
    EXPECT_THROW(db::gain_pmf_dyadic(64), std::invalid_argument);
}

TEST(GainLaw, MgfClosedFormMatchesBruteForce) {
    for (double eta : {-1.0, -0.5, -0.1, 0.0, 0.1, 0.5}) {
        for (int x = 1; x <= 60; ++x) {
            const double brute = db::gain_mgf_brute(x, eta);
            const double closed = db::gain_mgf(x, eta);
            EXPECT_NEAR(closed / brute, 1.0, 1e-12) << "x=" << x << " eta=" << eta;
        }
    }
    EXPECT_THROW(db::gain_mgf(5, std::log(2.0)), std::domain_error); // pole
    EXPECT_DOUBLE_EQ(db::gain_mgf(4, 0.0), 1.0);
}

TEST(GainLaw, SamplerMatchesMean) {
    db::RngStream rng(99, 0);
    const int x = 5;
    const int trials = 200000;
    double sum = 0.0;
    for (int i = 0; i < trials; ++i) {
        const int g = db::sample_gain(rng, x);
        ASSERT_GE(g, 1);
        ASSERT_LE(g, x);
        sum += g;
    }
    const double mean = sum / trials;
    // Var(G) < 2, so 3 standard errors is a generous envelope
    EXPECT_NEAR(mean, 1.9375, 3.0 * std::sqrt(2.0 / trials));
}

TEST(MartingaleTail, BranchesAndDomain) {
    db::TailBoundParams params;
    params.nu_sq_sum = 8.0;
    params.b2 = 2.0;
    params.b1 = 4.0;
    // nu^2 / b2 = 4 splits the branches; nu^2 / b1 = 2 floors the domain
    EXPECT_DOUBLE_EQ(db::martingale_tail(5.0, params), std::exp(-5.0 / 4.0));
    EXPECT_DOUBLE_EQ(db::martingale_tail(3.0, params), std::exp(-9.0 / 16.0));
    EXPECT_NEAR(db::martingale_tail(4.0 - 1e-12, params), db::martingale_tail(4.0, params),
                1e-9); // continuous at the split
    EXPECT_THROW(db::martingale_tail(1.9, params), std::domain_error);

    db::TailBoundParams wide; // b1 defaults to infinity: valid from d = 0
    wide.nu_sq_sum = 8.0;
    wide.b2 = 2.0;
    EXPECT_DOUBLE_EQ(db::martingale_tail(0.0, wide), 1.0);
    EXPECT_LE(db::martingale_tail(1.0, wide), 1.0);

    db::TailBoundParams bad = params;
    bad.b2 = 0.0;
    EXPECT_THROW(db::martingale_tail(5.0, bad), std::invalid_argument);
    bad = params;
    bad.nu_sq_sum = -1.0;
    EXPECT_THROW(db::martingale_tail(5.0, bad), std::invalid_argument);
}

TEST(MgfDriftBound, LambdaGrid) {
    const auto grid = db::default_lambda_grid(100);
    ASSERT_EQ(grid.size(), 33u);
    EXPECT_NEAR(grid.front(), 1.0 / (100.0 * 100.0), 1e-18);
    EXPECT_NEAR(grid.back(), 1.0 / (2.0 * M_E * 100.0), 1e-18);
    for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_GT(grid[i], grid[i - 1]);
    EXPECT_THROW(db::default_lambda_grid(100, 1), std::invalid_argument);
}

TEST(MgfDriftBound, VerifiedConstant) {
    const int n = 100;
    const double c0 = db::verify_mgf_drift_bound(n, db::default_lambda_grid(n), 0.0);
    EXPECT_NEAR(c0 / 1.510243, 1.0, 1e-4);
    const double cr = db::verify_mgf_drift_bound(n, db::default_lambda_grid(n), 1.0 / n);
    EXPECT_GT(cr, c0);

    EXPECT_THROW(db::verify_mgf_drift_bound(n, {1.0 / n}, 0.0), std::invalid_argument);
    EXPECT_THROW(db::verify_mgf_drift_bound(n, db::default_lambda_grid(n), -0.1),
                 std::invalid_argument);
}

TEST(MgfDriftBound, BracketConstantChain) {
    EXPECT_DOUBLE_EQ(db::calibrated_bracket_constant(3.0), 4.0 * std::sqrt(9.0));
    EXPECT_NEAR(db::calibrated_bracket_constant(1.885144904557552), 4.0 * std::sqrt(3.0 * 1.885144904557552), 1e-12);
    EXPECT_THROW(db::calibrated_bracket_constant(0.0), std::invalid_argument);
    EXPECT_THROW(db::calibrated_bracket_constant(-1.0), std::invalid_argument);
}
