#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "driftbudget/bounds.hpp"
#include "driftbudget/ea.hpp"
#include "driftbudget/gain.hpp"
#include "driftbudget/lo_exact.hpp"
#include "driftbudget/potential.hpp"
#include "driftbudget/stats.hpp"

namespace driftbudget {

struct EnsembleConfig {
    Problem problem = Problem::one_max;
    int n = 0;
    std::uint64_t trials = 0;
    Budget budget;
    std::vector<std::uint64_t> checkpoints;
    std::uint64_t master_seed = 0;
    bool fast_lo = false;
};

struct HittingTimeSample {
    std::vector<double> values; // uncensored hitting times
    std::uint64_t censored_count = 0;
};

struct CheckpointSummary {
    std::uint64_t t = 0;
    double mean = 0.0;
    double variance = 0.0; // 0 when trials < 2
    double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
};

struct EnsembleStats {
    EnsembleConfig config;
    // fitness[k][trial] = fitness at checkpoint k; raw samples retained so
    // bracket coverage can be evaluated after the fact.
    std::vector<std::vector<int>> fitness;
    std::vector<std::uint64_t> hitting_times; // per trial; censored ones hold the budget
    std::vector<std::uint8_t> censored;       // per trial
    std::vector<CheckpointSummary> summaries;

    HittingTimeSample hitting_sample() const {
        HittingTimeSample s;
        for (std::size_t i = 0; i < hitting_times.size(); ++i) {
            if (censored[i]) ++s.censored_count;
            else s.values.push_back(static_cast<double>(hitting_times[i]));
        }
        return s;
    }
};

// Level-based LeadingOnes run: instead of bit operations it draws, per
// fitness level v, a geometric waiting time with the exact improvement
// probability (1-1/n)^v / n and then a jump from the gain pmf at distance
// n - v. The initial level is min(Geometric0(1/2), n), matching a uniform
// random string. Identical in distribution to the bit-level simulation of the
// fitness trace, at O(n) level events per run instead of O(n^2) bit work.
inline Trajectory fast_lo_trial(int n, Budget budget,
                                const std::vector<std::uint64_t>& checkpoints, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("fast_lo_trial: n must be >= 1");
    detail::validate_checkpoints(checkpoints, budget);

    const double q = 1.0 - 1.0 / static_cast<double>(n);
    int v = std::min(rng.geometric_half_failures(), n);

    Trajectory traj;
    traj.checkpoints = checkpoints;
    traj.fitness_at.reserve(checkpoints.size());
    std::size_t cp = 0;
    std::uint64_t iter = 0;

    while (v < n) {
        const double p = std::pow(q, v) / static_cast<double>(n);
        const std::uint64_t wait = rng.geometric(p);
        const std::uint64_t t_next = iter + wait;
        if (budget && t_next > *budget) {
            while (cp < checkpoints.size()) {
                traj.fitness_at.push_back(v);
                ++cp;
            }
            traj.hitting_time = *budget;
            traj.censored = true;
            return traj;
        }
        while (cp < checkpoints.size() && checkpoints[cp] < t_next) {
            traj.fitness_at.push_back(v);
            ++cp;
        }
        v += sample_gain(rng, n - v);
        iter = t_next;
    }

    while (cp < checkpoints.size()) {
        traj.fitness_at.push_back(v);
        ++cp;
    }
    traj.hitting_time = iter;
    return traj;
}

namespace detail {

inline CheckpointSummary summarize_checkpoint(std::uint64_t t, const std::vector<int>& samples) {
    CheckpointSummary s;
    s.t = t;
    std::vector<double> v(samples.begin(), samples.end());
    s.mean = mean(v);
    s.variance = v.size() >= 2 ? sample_variance(v) : 0.0;
    std::sort(v.begin(), v.end());
    auto q = [&](double p) {
        const double h = (static_cast<double>(v.size()) - 1.0) * p;
        const std::size_t lo = static_cast<std::size_t>(h);
        if (lo + 1 >= v.size()) return v.back();
        return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
    };
    s.q05 = q(0.05);
    s.q25 = q(0.25);
    s.q50 = q(0.50);
    s.q75 = q(0.75);
    s.q95 = q(0.95);
    return s;
}

} // namespace detail

// Runs config.trials independent trials and aggregates. Each trial's RNG is
// derived from (master_seed, trial_index) alone and results are written into
// preallocated per-trial slots, so the outcome is bit-identical for every
// worker count.
inline EnsembleStats run_ensemble(const EnsembleConfig& config, int workers = 1) {
    if (config.trials < 1) throw std::invalid_argument("run_ensemble: trials must be >= 1");
    if (config.n < 1) throw std::invalid_argument("run_ensemble: n must be >= 1");
    if (config.fast_lo && config.problem != Problem::leading_ones)
        throw std::invalid_argument("run_ensemble: fast simulator only covers leadingones");
    if (workers < 1) workers = 1;

    EnsembleStats stats;
    stats.config = config;
    const std::size_t trials = static_cast<std::size_t>(config.trials);
    const std::size_t ncp = config.checkpoints.size();
    stats.fitness.assign(ncp, std::vector<int>(trials, 0));
    stats.hitting_times.assign(trials, 0);
    stats.censored.assign(trials, 0);

    const MutationSampler sampler(config.n);
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t trial = begin; trial < end; ++trial) {
            RngStream rng(config.master_seed, trial);
            Trajectory traj =
                config.fast_lo
                    ? fast_lo_trial(config.n, config.budget, config.checkpoints, rng)
                    : run_trial(config.problem, config.n, config.budget, config.checkpoints,
                                sampler, rng);
            for (std::size_t k = 0; k < ncp; ++k) stats.fitness[k][trial] = traj.fitness_at[k];
            stats.hitting_times[trial] = traj.hitting_time;
            stats.censored[trial] = traj.censored ? 1 : 0;
        }
    };

    const std::size_t use = std::min<std::size_t>(static_cast<std::size_t>(workers), trials);
    if (use <= 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(use);
        const std::size_t chunk = (trials + use - 1) / use;
        for (std::size_t w = 0; w < use; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(trials, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    run_range(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    stats.summaries.reserve(ncp);
    for (std::size_t k = 0; k < ncp; ++k)
        stats.summaries.push_back(
            detail::summarize_checkpoint(config.checkpoints[k], stats.fitness[k]));
    return stats;
}

// Empirical survival curve P^(s < T) for s = 0..horizon-1. Censored trials
// survive every s below the budget. horizon = 0 picks the budget when one is
// set, otherwise the largest observed hitting time.
inline SurvivalCurve empirical_survival(const EnsembleStats& stats, std::uint64_t horizon = 0) {
    if (stats.hitting_times.empty())
        throw std::invalid_argument("empirical_survival: no hitting times recorded");
    if (horizon == 0) {
        if (stats.config.budget) horizon = *stats.config.budget;
        else horizon = *std::max_element(stats.hitting_times.begin(), stats.hitting_times.end());
    }
    if (stats.config.budget && horizon > *stats.config.budget)
        throw std::invalid_argument("empirical_survival: horizon exceeds the budget");

    // ended[s] = number of uncensored trials with T = s; censored trials have
    // T beyond the budget and stay alive through the whole horizon.
    std::vector<std::uint64_t> ended(horizon, 0);
    for (std::size_t i = 0; i < stats.hitting_times.size(); ++i)
        if (!stats.censored[i] && stats.hitting_times[i] < horizon)
            ++ended[stats.hitting_times[i]];
    SurvivalCurve curve;
    curve.source = "empirical";
    curve.probs.resize(horizon);
    const double total = static_cast<double>(stats.hitting_times.size());
    std::uint64_t alive = stats.hitting_times.size();
    for (std::uint64_t s = 0; s < horizon; ++s) {
        alive -= ended[s]; // now counts trials with T > s
        curve.probs[s] = static_cast<double>(alive) / total;
    }
    return curve;
}

struct ComparisonEntry {
    BoundPrediction prediction;
    double sample_mean = 0.0;
    double sample_se = 0.0;
    double lower_cl = 0.0;        // lower-bound kind
    double fraction_inside = 0.0; // bracket kind
    bool mean_inside = false;     // bracket kind
    bool insufficient_sample = false;
    bool pass = false;
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;
    double confidence = 0.0;
    double min_inside_fraction = 0.0;
    std::uint64_t master_seed = 0;

    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

// Checks each prediction against the ensemble at its checkpoint. Lower
// bounds pass when the one-sided lower confidence limit of the sample mean
// stays at or above the predicted value (slack already inside the value);
// brackets pass when at least min_inside of the trials and the sample mean
// lie inside. A single-trial ensemble is flagged instead of judged.
inline ComparisonReport compare_bounds(const EnsembleStats& stats,
                                       const std::vector<BoundPrediction>& predictions,
                                       double confidence = 0.99, double min_inside = 0.98) {
    ComparisonReport report;
    report.confidence = confidence;
    report.min_inside_fraction = min_inside;
    report.master_seed = stats.config.master_seed;

    for (const BoundPrediction& pred : predictions) {
        std::size_t k = 0;
        while (k < stats.config.checkpoints.size() && stats.config.checkpoints[k] != pred.t) ++k;
        if (k == stats.config.checkpoints.size())
            throw std::invalid_argument("compare_bounds: prediction checkpoint " +
                                        std::to_string(pred.t) + " not in the ensemble");

        ComparisonEntry entry;
        entry.prediction = pred;
        const std::vector<int>& samples = stats.fitness[k];
        const CheckpointSummary& summary = stats.summaries[k];
        entry.sample_mean = summary.mean;

        if (samples.size() < 2) {
            entry.insufficient_sample = true;
            entry.pass = false;
            report.entries.push_back(entry);
            continue;
        }
        entry.sample_se = std::sqrt(summary.variance / static_cast<double>(samples.size()));

        if (pred.kind == BoundPrediction::Kind::lower_bound) {
            entry.lower_cl = entry.sample_mean - inverse_normal_cdf(confidence) * entry.sample_se;
            entry.pass = entry.lower_cl >= pred.value;
        } else {
            std::size_t inside = 0;
            for (int v : samples)
                if (pred.lower <= static_cast<double>(v) && static_cast<double>(v) <= pred.upper)
                    ++inside;
            entry.fraction_inside =
                static_cast<double>(inside) / static_cast<double>(samples.size());
            entry.mean_inside =
                pred.lower <= entry.sample_mean && entry.sample_mean <= pred.upper;
            entry.pass = entry.fraction_inside >= min_inside && entry.mean_inside;
        }
        report.entries.push_back(entry);
    }
    return report;
}

} // namespace driftbudget
