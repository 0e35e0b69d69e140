#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "driftbudget/bitstring.hpp"
#include "driftbudget/fitness.hpp"
#include "driftbudget/rng.hpp"

namespace driftbudget {

// Iteration budget: empty means run until the optimum is hit.
using Budget = std::optional<std::uint64_t>;

// Standard-mutation sampler: every bit flips independently with probability
// 1/n. Sampled as (flip count ~ Binomial(n, 1/n)) followed by a uniform
// random subset of that size, which induces exactly the per-bit product law:
// any mask M with |M| = k has probability (1/n)^k (1-1/n)^(n-k).
class MutationSampler {
public:
    explicit MutationSampler(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("MutationSampler: n must be positive");
        if (n == 1) {
            cdf_ = {0.0, 1.0}; // the single bit always flips
            return;
        }
        double pmf = std::pow(1.0 - 1.0 / n, n);
        double cdf = pmf;
        cdf_.push_back(cdf);
        int k = 0;
        while (cdf < 1.0 - 1e-18 && k < n) {
            pmf *= static_cast<double>(n - k) / (static_cast<double>(k + 1) * (n - 1));
            ++k;
            cdf += pmf;
            cdf_.push_back(cdf);
        }
        cdf_.back() = std::max(cdf_.back(), 1.0);
    }

    int n() const { return n_; }

    int draw_count(RngStream& rng) const {
        const double u = rng.uniform01();
        for (std::size_t k = 0; k < cdf_.size(); ++k)
            if (u <= cdf_[k]) return static_cast<int>(k);
        return static_cast<int>(cdf_.size()) - 1;
    }

    // k distinct uniform positions in [0, n); order unspecified.
    void draw_positions(RngStream& rng, int k, std::vector<int>& out) const {
        out.clear();
        for (int j = 0; j < k; ++j) {
            for (;;) {
                const int pos = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_)));
                bool dup = false;
                for (int q : out)
                    if (q == pos) { dup = true; break; }
                if (!dup) {
                    out.push_back(pos);
                    break;
                }
            }
        }
    }

private:
    int n_;
    std::vector<double> cdf_; // cdf_[k] = P(flip count <= k)
};

inline BitString random_bitstring(int n, RngStream& rng) {
    BitString x(n);
    for (int i = 0; i < n; ++i)
        if (rng.coin()) x.set(i, true);
    return x;
}

struct EAState {
    BitString x;
    int fitness = 0;
    std::uint64_t iteration = 0;
};

// One (1+1) elitist step with full re-evaluation; mutates the state in place
// and reports acceptance. Consumes exactly the same random draws as the
// specialized trial loops below, so trajectories can be cross-checked.
template <typename F>
bool ea_step(EAState& s, const MutationSampler& sampler, RngStream& rng, F&& f,
             std::vector<int>& scratch) {
    ++s.iteration;
    const int k = sampler.draw_count(rng);
    if (k == 0) return true; // offspring equals parent
    sampler.draw_positions(rng, k, scratch);
    for (int pos : scratch) s.x.flip(pos);
    const int fy = f(s.x);
    if (fy >= s.fitness) {
        s.fitness = fy;
        return true;
    }
    for (int pos : scratch) s.x.flip(pos);
    return false;
}

// Fitness trace of one run. fitness_at[k] is the parent fitness after
// checkpoints[k] completed iterations (checkpoint 0 gives the initial value).
// The initial evaluation is not an iteration; hitting_time is the number of
// iterations until the optimum became the parent, 0 if the initial string is
// already optimal, and equals the budget with censored=true when the budget
// ran out first.
struct Trajectory {
    std::vector<std::uint64_t> checkpoints;
    std::vector<int> fitness_at;
    std::uint64_t hitting_time = 0;
    bool censored = false;
};

namespace detail {

inline void validate_checkpoints(const std::vector<std::uint64_t>& cps, Budget budget) {
    for (std::size_t i = 1; i < cps.size(); ++i)
        if (cps[i] <= cps[i - 1])
            throw std::invalid_argument("checkpoints must be strictly increasing");
    if (budget && !cps.empty() && cps.back() > *budget)
        throw std::invalid_argument("checkpoints must not exceed the budget");
}

} // namespace detail

// Bit-level (1+1) run with incremental fitness maintenance. OneMax tracks the
// signed flip balance; LeadingOnes rejects on any flip left of the frontier
// and rescans forward only when the frontier bit itself flipped.
inline Trajectory run_trial(Problem problem, int n, Budget budget,
                            const std::vector<std::uint64_t>& checkpoints,
                            const MutationSampler& sampler, RngStream& rng) {
    if (sampler.n() != n) throw std::invalid_argument("run_trial: sampler length mismatch");
    detail::validate_checkpoints(checkpoints, budget);

    BitString x = random_bitstring(n, rng);
    int fit = evaluate(problem, x);

    Trajectory traj;
    traj.checkpoints = checkpoints;
    traj.fitness_at.reserve(checkpoints.size());

    std::vector<int> flips;
    flips.reserve(8);
    std::size_t cp = 0;
    std::uint64_t iter = 0;

    for (;;) {
        while (cp < checkpoints.size() && checkpoints[cp] == iter) {
            traj.fitness_at.push_back(fit);
            ++cp;
        }
        if (fit == n) {
            traj.hitting_time = iter;
            break;
        }
        if (budget && iter >= *budget) {
            traj.hitting_time = *budget;
            traj.censored = true;
            break;
        }

        const int k = sampler.draw_count(rng);
        if (k > 0) {
            sampler.draw_positions(rng, k, flips);
            if (problem == Problem::one_max) {
                int delta = 0;
                for (int pos : flips) delta += x.test(pos) ? -1 : 1;
                if (delta >= 0) {
                    for (int pos : flips) x.flip(pos);
                    fit += delta;
                }
            } else {
                int m = n;
                for (int pos : flips) m = std::min(m, pos);
                if (m >= fit) {
                    for (int pos : flips) x.flip(pos);
                    if (m == fit) {
                        int v = fit;
                        while (v < n && x.test(v)) ++v;
                        fit = v;
                    }
                }
            }
        }
        ++iter;
    }

    while (cp < checkpoints.size()) {
        traj.fitness_at.push_back(fit);
        ++cp;
    }
    return traj;
}

inline Trajectory run_trial(Problem problem, int n, Budget budget,
                            const std::vector<std::uint64_t>& checkpoints, RngStream& rng) {
    MutationSampler sampler(n);
    return run_trial(problem, n, budget, checkpoints, sampler, rng);
}

} // namespace driftbudget
