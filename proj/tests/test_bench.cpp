#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "driftbudget/driftbudget.hpp"

namespace db = driftbudget;

namespace {

db::BitString from_bits(std::initializer_list<int> bits) {
    std::vector<std::uint8_t> v;
    for (int b : bits) v.push_back(static_cast<std::uint8_t>(b));
    return db::BitString(static_cast<int>(v.size()), v);
}

} // namespace

TEST(BitString, BasicOps) {
    db::BitString x(5);
    for (int i = 0; i < 5; ++i) EXPECT_FALSE(x.test(i));
    x.set(2, true);
    EXPECT_TRUE(x.test(2));
    x.flip(2);
    EXPECT_FALSE(x.test(2));
    x.flip(4);
    EXPECT_TRUE(x.test(4));
    EXPECT_EQ(x.size(), 5);
    EXPECT_THROW(x.test(5), std::out_of_range);
    EXPECT_THROW(x.flip(-1), std::out_of_range);
}

TEST(BitString, ValidatingCtorAndEquality) {
    const db::BitString a = from_bits({1, 0, 1});
    const db::BitString b = from_bits({1, 0, 1});
    const db::BitString c = from_bits({1, 1, 1});
    EXPECT_EQ(a, b);
    EXPECT_FALSE(a == c);
    EXPECT_THROW(db::BitString(2, {0, 2}), std::invalid_argument);
    EXPECT_THROW(db::BitString(3, {0, 1}), std::invalid_argument);
}

TEST(Fitness, ExhaustiveSmallN) {
    for (int n : {1, 2, 3, 4, 8, 12}) {
        for (std::uint32_t m = 0; m < (1u << n); ++m) {
            db::BitString x(n);
            int ones = 0;
            int lead = -1;
            for (int i = 0; i < n; ++i) {
                const bool bit = (m >> i) & 1u;
                x.set(i, bit);
                if (bit) ++ones;
                if (lead < 0 && !bit) lead = i;
            }
            if (lead < 0) lead = n;
            EXPECT_EQ(db::one_max(x), ones);
            EXPECT_EQ(db::leading_ones(x), lead);
            EXPECT_EQ(db::evaluate(db::Problem::one_max, x), ones);
            EXPECT_EQ(db::evaluate(db::Problem::leading_ones, x), lead);
        }
    }
}

TEST(Fitness, AdjustedLeadingOnes) {
    EXPECT_EQ(db::adjusted_lo(from_bits({1, 1, 1, 1})), 5);
    EXPECT_EQ(db::adjusted_lo(from_bits({1, 1, 0, 1})), 2);
    EXPECT_EQ(db::adjusted_lo(from_bits({0, 1, 1, 1})), 0);
    EXPECT_EQ(db::adjusted_lo(from_bits({1, 1, 1, 0})), 3);
}

TEST(Fitness, ProblemNames) {
    EXPECT_EQ(db::problem_name(db::Problem::one_max), "onemax");
    EXPECT_EQ(db::problem_name(db::Problem::leading_ones), "leadingones");
    EXPECT_EQ(db::problem_from_name("onemax"), db::Problem::one_max);
    EXPECT_EQ(db::problem_from_name("leadingones"), db::Problem::leading_ones);
    EXPECT_THROW(db::problem_from_name("leading-ones"), std::invalid_argument);
}

TEST(Rng, StreamsAreDeterministicAndDistinct) {
    db::RngStream a(7, 3), b(7, 3), c(7, 4);
    bool any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        EXPECT_EQ(va, b.next_u64());
        if (va != c.next_u64()) any_diff = true;
    }
    EXPECT_TRUE(any_diff);
}

TEST(Rng, Uniform01StrictlyInside) {
    db::RngStream rng(11, 0);
    double mn = 1.0, mx = 0.0, sum = 0.0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        const double u = rng.uniform01();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        mn = std::min(mn, u);
        mx = std::max(mx, u);
        sum += u;
    }
    EXPECT_LT(mn, 1e-4);
    EXPECT_GT(mx, 1.0 - 1e-4);
    EXPECT_NEAR(sum / draws, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / draws));
}

TEST(Rng, BelowIsUnbiasedOverSmallRange) {
    db::RngStream rng(12, 0);
    const int draws = 100000;
    std::vector<int> counts(10, 0);
    for (int i = 0; i < draws; ++i) {
        const std::uint64_t v = rng.below(10);
        ASSERT_LT(v, 10u);
        ++counts[static_cast<std::size_t>(v)];
    }
    const double expected = draws / 10.0;
    const double tol = 5.0 * std::sqrt(draws * 0.1 * 0.9);
    for (int c : counts) EXPECT_NEAR(static_cast<double>(c), expected, tol);
    EXPECT_THROW(rng.below(0), std::invalid_argument);
}

TEST(Rng, GeometricHalfFailuresMatchesLaw) {
    db::RngStream rng(13, 0);
    const int draws = 400000;
    double sum = 0.0;
    std::vector<int> counts(8, 0);
    for (int i = 0; i < draws; ++i) {
        const int k = rng.geometric_half_failures();
        ASSERT_GE(k, 0);
        sum += k;
        if (k < 8) ++counts[static_cast<std::size_t>(k)];
    }
    // mean 1, variance 2
    EXPECT_NEAR(sum / draws, 1.0, 5.0 * std::sqrt(2.0 / draws));
    for (int k = 0; k < 8; ++k) {
        const double p = std::ldexp(1.0, -(k + 1));
        EXPECT_NEAR(counts[static_cast<std::size_t>(k)] / static_cast<double>(draws), p,
                    5.0 * std::sqrt(p * (1.0 - p) / draws));
    }
}

TEST(Rng, GeometricWaitingTime) {
    db::RngStream rng(14, 0);
    EXPECT_EQ(rng.geometric(1.0), 1u);
    EXPECT_THROW(rng.geometric(0.0), std::invalid_argument);
    EXPECT_THROW(rng.geometric(1.5), std::invalid_argument);
    const int draws = 200000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        const std::uint64_t w = rng.geometric(0.25);
        ASSERT_GE(w, 1u);
        sum += static_cast<double>(w);
    }
    // mean 4, variance (1-p)/p^2 = 12
    EXPECT_NEAR(sum / draws, 4.0, 5.0 * std::sqrt(12.0 / draws));
}

TEST(Mutation, CountLawMatchesEnumeratedMaskLaw) {
    // For small n, sum the per-bit product law over all 2^n masks grouped by
    // popcount and compare with the sampler's tabulated binomial pmf.
    for (int n : {2, 5, 8}) {
        const db::MutationSampler sampler(n);
        std::vector<double> mass(static_cast<std::size_t>(n) + 1, 0.0);
        const double p = 1.0 / n;
        for (std::uint32_t m = 0; m < (1u << n); ++m) {
            const int k = std::popcount(m);
            mass[static_cast<std::size_t>(k)] +=
                std::pow(p, k) * std::pow(1.0 - p, n - k);
        }
        // the enumerated per-popcount mass must equal the binomial pmf exactly
        double total = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double binom = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                          std::lgamma(n - k + 1.0)) *
                                 std::pow(p, k) * std::pow(1.0 - p, n - k);
            EXPECT_NEAR(mass[static_cast<std::size_t>(k)], binom, 1e-12);
            total += mass[static_cast<std::size_t>(k)];
        }
        EXPECT_NEAR(total, 1.0, 1e-12);

        // and the sampler's empirical count law matches that mass exactly in
        // distribution: large fixed-seed sample, 5 sigma bands
        db::RngStream rng(100 + n, 0);
        const int draws = 200000;
        std::vector<int> counts(static_cast<std::size_t>(n) + 1, 0);
        for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(sampler.draw_count(rng))];
        for (int k = 0; k <= n; ++k) {
            const double pk = mass[static_cast<std::size_t>(k)];
            EXPECT_NEAR(counts[static_cast<std::size_t>(k)] / static_cast<double>(draws), pk,
                        5.0 * std::sqrt(pk * (1.0 - pk) / draws) + 1e-4);
        }
    }
}

TEST(Mutation, PositionsAreDistinctAndUniform) {
    const int n = 5, k = 2;
    const db::MutationSampler sampler(n);
    db::RngStream rng(77, 0);
    std::vector<int> out;
    std::map<std::pair<int, int>, int> freq;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        sampler.draw_positions(rng, k, out);
        ASSERT_EQ(out.size(), 2u);
        ASSERT_NE(out[0], out[1]);
        ++freq[{std::min(out[0], out[1]), std::max(out[0], out[1])}];
    }
    EXPECT_EQ(freq.size(), 10u); // C(5,2) subsets all occur
    const double expect = draws / 10.0;
    const double tol = 5.0 * std::sqrt(draws * 0.1 * 0.9);
    for (const auto& [pair, c] : freq) EXPECT_NEAR(static_cast<double>(c), expect, tol);
}

TEST(Mutation, FullMaskLawByEnumerationTinyN) {
    // n = 2: the mask law has four atoms; check each against (1/n)^k (1-1/n)^(n-k)
    // using a large fixed-seed sample of (count, positions) draws.
    const int n = 2;
    const db::MutationSampler sampler(n);
    db::RngStream rng(78, 0);
    std::vector<int> out;
    std::map<std::uint32_t, int> freq;
    const int draws = 400000;
    for (int i = 0; i < draws; ++i) {
        const int k = sampler.draw_count(rng);
        std::uint32_t mask = 0;
        if (k > 0) {
            sampler.draw_positions(rng, k, out);
            for (int pos : out) mask |= 1u << pos;
        }
        ++freq[mask];
    }
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
        const int k = std::popcount(mask);
        const double p = std::pow(0.5, k) * std::pow(0.5, n - k); // (1/2)^k (1/2)^(2-k)
        EXPECT_NEAR(freq[mask] / static_cast<double>(draws), p,
                    5.0 * std::sqrt(p * (1.0 - p) / draws));
    }
}

TEST(EaStep, OneStepDistributionTinyOneMax) {
    // From parent 00 on n=2 OneMax: P(fit 0) = 1/4, P(1) = 1/2, P(2) = 1/4.
    db::RngStream rng(55, 0);
    const db::MutationSampler sampler(2);
    std::vector<int> scratch;
    const int draws = 200000;
    int hist[3] = {0, 0, 0};
    for (int i = 0; i < draws; ++i) {
        db::EAState st{db::BitString(2), 0};
        db::ea_step(st, sampler, rng, [](const db::BitString& x) { return db::one_max(x); },
                    scratch);
        EXPECT_EQ(st.iteration, 1u);
        ++hist[st.fitness];
    }
    const double probs[3] = {0.25, 0.5, 0.25};
    for (int f = 0; f < 3; ++f)
        EXPECT_NEAR(hist[f] / static_cast<double>(draws), probs[f],
                    5.0 * std::sqrt(probs[f] * (1.0 - probs[f]) / draws));
}

TEST(EaStep, RejectionRestoresParent) {
    // Parent 11 on n=2 OneMax: a single flip is always rejected, the full
    // double flip is rejected; parent must come back intact every time.
    db::RngStream rng(56, 0);
    const db::MutationSampler sampler(2);
    std::vector<int> scratch;
    db::EAState st{from_bits({1, 1}), 2};
    for (int i = 0; i < 5000; ++i) {
        db::ea_step(st, sampler, rng, [](const db::BitString& x) { return db::one_max(x); },
                    scratch);
        ASSERT_EQ(st.fitness, 2);
        ASSERT_TRUE(st.x.test(0));
        ASSERT_TRUE(st.x.test(1));
    }
    EXPECT_EQ(st.iteration, 5000u);
}

TEST(RunTrial, DeterministicAndSeedSensitive) {
    const std::vector<std::uint64_t> cps{0, 10, 100};
    db::RngStream r1(9001, 0), r2(9001, 0), r3(9001, 1);
    const auto a = db::run_trial(db::Problem::leading_ones, 40, 100, cps, r1);
    const auto b = db::run_trial(db::Problem::leading_ones, 40, 100, cps, r2);
    const auto c = db::run_trial(db::Problem::leading_ones, 40, 100, cps, r3);
    EXPECT_EQ(a.fitness_at, b.fitness_at);
    EXPECT_EQ(a.hitting_time, b.hitting_time);
    EXPECT_EQ(a.censored, b.censored);
    EXPECT_TRUE(a.fitness_at != c.fitness_at || a.hitting_time != c.hitting_time);
}

TEST(RunTrial, MatchesGenericStepHarness) {
    // The specialized trial loop and the generic ea_step harness consume the
    // same stream, so identical seeds must give identical traces.
    for (db::Problem problem : {db::Problem::one_max, db::Problem::leading_ones}) {
        for (std::uint64_t trial = 0; trial < 8; ++trial) {
            const int n = 25;
            const db::Budget budget = 400;
            const std::vector<std::uint64_t> cps{0, 7, 50, 400};
            db::RngStream fast_rng(321, trial);
            const auto fast = db::run_trial(problem, n, budget, cps, fast_rng);

            db::RngStream slow_rng(321, trial);
            const db::MutationSampler sampler(n);
            db::EAState st{db::random_bitstring(n, slow_rng), 0};
            st.fitness = db::evaluate(problem, st.x);
            std::vector<int> scratch;
            std::vector<int> fitness_at;
            std::uint64_t hit = 0;
            bool censored = false;
            std::size_t cp = 0;
            for (;;) {
                while (cp < cps.size() && cps[cp] == st.iteration) {
                    fitness_at.push_back(st.fitness);
                    ++cp;
                }
                if (st.fitness == n) {
                    hit = st.iteration;
                    break;
                }
                if (budget && st.iteration >= *budget) {
                    hit = *budget;
                    censored = true;
                    break;
                }
                db::ea_step(st, sampler, slow_rng,
                            [problem](const db::BitString& x) { return db::evaluate(problem, x); },
                            scratch);
            }
            while (cp < cps.size()) {
                fitness_at.push_back(st.fitness);
                ++cp;
            }

            EXPECT_EQ(fast.fitness_at, fitness_at);
            EXPECT_EQ(fast.hitting_time, hit);
            EXPECT_EQ(fast.censored, censored);
        }
    }
}

TEST(RunTrial, CheckpointAndBudgetSemantics) {
    // budget 0: nothing runs; the only information is the initial string.
    db::RngStream rng(2024, 0);
    const auto t0 = db::run_trial(db::Problem::one_max, 30, std::uint64_t{0},
                                  std::vector<std::uint64_t>{0}, rng);
    EXPECT_TRUE(t0.censored);
    EXPECT_EQ(t0.hitting_time, 0u);
    ASSERT_EQ(t0.fitness_at.size(), 1u);
    EXPECT_GE(t0.fitness_at[0], 0);
    EXPECT_LT(t0.fitness_at[0], 30);

    // elitist: the trace is non-decreasing, and checkpoint 0 is the start
    db::RngStream rng2(2024, 1);
    const std::vector<std::uint64_t> cps{0, 30, 60, 120, 300};
    const auto tr = db::run_trial(db::Problem::leading_ones, 30, 300, cps, rng2);
    ASSERT_EQ(tr.fitness_at.size(), cps.size());
    for (std::size_t i = 1; i < tr.fitness_at.size(); ++i)
        EXPECT_GE(tr.fitness_at[i], tr.fitness_at[i - 1]);

    // unbounded run terminates at the optimum
    db::RngStream rng3(2024, 2);
    const auto done = db::run_trial(db::Problem::one_max, 12, std::nullopt,
                                    std::vector<std::uint64_t>{}, rng3);
    EXPECT_FALSE(done.censored);
    EXPECT_GE(done.hitting_time, 0u);
}

TEST(RunTrial, ValidatesInput) {
    db::RngStream rng(1, 0);
    const db::MutationSampler sampler(10);
    EXPECT_THROW(db::run_trial(db::Problem::one_max, 11, std::nullopt, {}, sampler, rng),
                 std::invalid_argument);
    EXPECT_THROW(db::run_trial(db::Problem::one_max, 10, std::nullopt,
                               std::vector<std::uint64_t>{5, 5}, sampler, rng),
                 std::invalid_argument);
    EXPECT_THROW(db::run_trial(db::Problem::one_max, 10, std::uint64_t{10},
                               std::vector<std::uint64_t>{11}, sampler, rng),
                 std::invalid_argument);
}

TEST(RandomBitstring, UniformMarginals) {
    db::RngStream rng(606, 0);
    const int n = 50, draws = 20000;
    std::vector<int> ones(n, 0);
    for (int i = 0; i < draws; ++i) {
        const db::BitString x = db::random_bitstring(n, rng);
        for (int j = 0; j < n; ++j)
            if (x.test(j)) ++ones[static_cast<std::size_t>(j)];
    }
    const double tol = 5.0 * std::sqrt(0.25 / draws);
    for (int j = 0; j < n; ++j)
        EXPECT_NEAR(ones[static_cast<std::size_t>(j)] / static_cast<double>(draws), 0.5, tol);
}
