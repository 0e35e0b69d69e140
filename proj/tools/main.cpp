#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "driftbudget/driftbudget.hpp"

namespace db = driftbudget;
namespace fs = std::filesystem;

namespace {

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int resolve_workers(int flag_workers) {
    if (flag_workers > 0) return flag_workers;
    if (const char* env = std::getenv("DRIFTBUDGET_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void write_text(const fs::path& p, const std::string& content) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec)
        throw std::ios_base::failure("cannot create directory '" + p.parent_path().string() +
                                     "': " + ec.message());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open '" + p.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::ios_base::failure("failed writing '" + p.string() + "'");
}

db::ExperimentConfig load_with_overrides(const std::string& path, bool seed_given,
                                         std::uint64_t seed, const std::string& out_override) {
    db::ExperimentConfig cfg = db::load_config(path);
    if (seed_given) cfg.master_seed = seed;
    if (!out_override.empty()) cfg.output_dir = out_override;
    return cfg;
}

// Bracket-width constant from the mgf calibration chain, taking the worse of
// the martingale (r = 0) and submartingale (r = 1/n) constants.
double kappa_calibrated_bracket_c(int n) {
    const std::vector<double> grid = db::default_lambda_grid(n);
    const double c0 = db::verify_mgf_drift_bound(n, grid, 0.0);
    const double c1 = db::verify_mgf_drift_bound(n, grid, 1.0 / static_cast<double>(n));
    return db::calibrated_bracket_constant(std::max(c0, c1));
}

int cmd_simulate(const db::ExperimentConfig& cfg, int workers) {
    const db::EnsembleStats stats = db::run_ensemble(db::to_ensemble_config(cfg), workers);
    const double cprime = db::constant_or(cfg.constants, "thm51_window_c", 1.0);
    const bool has_bracket_c = cfg.constants.count("thm51_c") > 0;

    std::ostringstream csv;
    csv << "checkpoint,mean,variance,q05,q25,q50,q75,q95,inside_bracket,trials\n";
    for (std::size_t k = 0; k < stats.summaries.size(); ++k) {
        const db::CheckpointSummary& s = stats.summaries[k];
        std::string inside = "NA";
        if (cfg.problem == db::Problem::leading_ones && has_bracket_c &&
            db::thm51_window_ok(cfg.n, s.t, cprime)) {
            try {
                const db::FitnessBracket br =
                    db::fitness_bracket(cfg.n, s.t, cfg.constants.at("thm51_c"), cprime);
                std::size_t count = 0;
                for (int v : stats.fitness[k])
                    if (br.lower <= v && v <= br.upper) ++count;
                inside = fmt_g(static_cast<double>(count) /
                               static_cast<double>(stats.fitness[k].size()));
            } catch (const std::domain_error&) {
                // bracket edge formula left its domain: column stays NA
            }
        }
        csv << s.t << ',' << fmt_g(s.mean) << ',' << fmt_g(s.variance) << ',' << fmt_g(s.q05)
            << ',' << fmt_g(s.q25) << ',' << fmt_g(s.q50) << ',' << fmt_g(s.q75) << ','
            << fmt_g(s.q95) << ',' << inside << ',' << stats.fitness[k].size() << "\n";
    }

    std::ostringstream hits;
    hits << "trial,hitting_time,censored\n";
    for (std::size_t i = 0; i < stats.hitting_times.size(); ++i)
        hits << i << ',' << stats.hitting_times[i] << ',' << int(stats.censored[i]) << "\n";

    const fs::path out(cfg.output_dir);
    write_text(out / "simulate.csv", csv.str());
    write_text(out / "hitting_times.csv", hits.str());

    std::cout << "simulate: " << db::problem_name(cfg.problem) << " n=" << cfg.n
              << " trials=" << cfg.trials << " seed=" << cfg.master_seed << "\n";
    for (const db::CheckpointSummary& s : stats.summaries)
        std::cout << "  t=" << s.t << " mean=" << fmt_g(s.mean) << " var=" << fmt_g(s.variance)
                  << "\n";
    const db::HittingTimeSample hs = stats.hitting_sample();
    std::cout << "  hits=" << hs.values.size() << " censored=" << hs.censored_count << "\n";
    std::cout << "wrote " << (out / "simulate.csv").string() << " and "
              << (out / "hitting_times.csv").string() << "\n";
    return 0;
}

int cmd_bounds(const db::ExperimentConfig& cfg) {
    const double cprime = db::constant_or(cfg.constants, "thm51_window_c", 1.0);
    const bool has_bracket_c = cfg.constants.count("thm51_c") > 0;

    std::ostringstream csv;
    csv << "t,thm35_sqrt_e,thm35_exp,thm36_linear,thm36_log,thm43_additive,"
           "thm51_lower,thm51_point,thm51_upper\n";
    for (std::uint64_t t : cfg.checkpoints) {
        std::string c35s = "NA", c35e = "NA", c36lin = "NA", c36log = "NA", c43 = "NA";
        std::string c51lo = "NA", c51pt = "NA", c51up = "NA";
        if (cfg.problem == db::Problem::one_max) {
            const auto preds = db::predict_onemax_fitness(cfg.n, t, cfg.constants);
            c35s = fmt_g(preds[0].value);
            c35e = fmt_g(preds[1].value);
        } else {
            c36lin = fmt_g(db::predict_lo_linear(cfg.n, t, cfg.constants).value);
            if (db::thm36_log_window_ok(cfg.n, t))
                c36log = fmt_g(db::predict_lo_log(cfg.n, t, cfg.constants).value);
            if (db::thm43_window_ok(cfg.n, t))
                c43 = fmt_g(db::predict_lo_additive(cfg.n, t, cfg.constants).value);
            if (db::thm51_window_ok(cfg.n, t, cprime)) {
                try {
                    c51pt = fmt_g(db::lo_log_formula(cfg.n, static_cast<double>(t), 0.0));
                } catch (const std::domain_error&) {
                }
                if (has_bracket_c) {
                    try {
                        const db::FitnessBracket br =
                            db::fitness_bracket(cfg.n, t, cfg.constants.at("thm51_c"), cprime);
                        c51lo = fmt_g(br.lower);
                        c51up = fmt_g(br.upper);
                    } catch (const std::domain_error&) {
                    }
                }
            }
        }
        csv << t << ',' << c35s << ',' << c35e << ',' << c36lin << ',' << c36log << ',' << c43
            << ',' << c51lo << ',' << c51pt << ',' << c51up << "\n";
    }

    const fs::path out(cfg.output_dir);
    write_text(out / "bounds.csv", csv.str());
    std::cout << "wrote " << (out / "bounds.csv").string() << "\n";
    return 0;
}

int cmd_verify(const db::ExperimentConfig& cfg, int workers) {
    const db::EnsembleStats stats = db::run_ensemble(db::to_ensemble_config(cfg), workers);
    const double cprime = db::constant_or(cfg.constants, "thm51_window_c", 1.0);
    const double z99 = db::inverse_normal_cdf(0.99);

    std::vector<db::BoundPrediction> preds;
    std::optional<double> calibrated_c;
    db::DriftFunction h_om =
        cfg.problem == db::Problem::one_max ? db::h_onemax(cfg.n) : db::h_leadingones(cfg.n);

    for (std::uint64_t t : cfg.checkpoints) {
        if (cfg.problem == db::Problem::one_max) {
            for (auto& p : db::predict_onemax_fitness(cfg.n, t, cfg.constants))
                preds.push_back(std::move(p));
            db::BoundPrediction it;
            it.theorem_id = "thm32_iterate";
            it.t = t;
            it.value = static_cast<double>(cfg.n) -
                       db::iterate_tilde(h_om, static_cast<double>(cfg.n) / 2.0, t);
            preds.push_back(std::move(it));
        } else {
            preds.push_back(db::predict_lo_linear(cfg.n, t, cfg.constants));
            if (db::thm36_log_window_ok(cfg.n, t))
                preds.push_back(db::predict_lo_log(cfg.n, t, cfg.constants));
            if (db::thm43_window_ok(cfg.n, t))
                preds.push_back(db::predict_lo_additive(cfg.n, t, cfg.constants));
            if (db::thm51_window_ok(cfg.n, t, cprime)) {
                double c;
                if (cfg.constants.count("thm51_c")) {
                    c = cfg.constants.at("thm51_c");
                } else {
                    if (!calibrated_c) calibrated_c = kappa_calibrated_bracket_c(cfg.n);
                    c = *calibrated_c;
                }
                try {
                    preds.push_back(db::to_prediction(db::fitness_bracket(cfg.n, t, c, cprime)));
                } catch (const std::domain_error&) {
                    // edge formula undefined at this t even inside the window
                }
            }
        }
    }

    const db::ComparisonReport report = db::compare_bounds(stats, preds, 0.99, 0.98);

    std::ostringstream rep;
    rep << "verify report\n";
    rep << "problem = " << db::problem_name(cfg.problem) << "\n";
    rep << "n = " << cfg.n << "\n";
    rep << "trials = " << cfg.trials << "\n";
    rep << "budget = " << (cfg.budget ? std::to_string(*cfg.budget) : std::string("unbounded"))
        << "\n";
    rep << "simulator = " << cfg.simulator << "\n";
    rep << "master_seed = " << cfg.master_seed << "\n";
    rep << "confidence = 0.99\n";
    rep << "constants:\n";
    for (const auto& [k, v] : cfg.constants) rep << "  " << k << " = " << fmt_g(v) << "\n";
    if (calibrated_c)
        rep << "  thm51_c = " << fmt_g(*calibrated_c) << " (calibrated from the mgf bound)\n";
    rep << "checks:\n";

    bool all_pass = true;
    for (const db::ComparisonEntry& e : report.entries) {
        all_pass = all_pass && e.pass;
        rep << (e.pass ? "[PASS] " : "[FAIL] ") << e.prediction.theorem_id
            << " t=" << e.prediction.t;
        if (e.insufficient_sample) {
            rep << ": insufficient sample (need >= 2 trials)";
        } else if (e.prediction.kind == db::BoundPrediction::Kind::lower_bound) {
            rep << ": bound=" << fmt_g(e.prediction.value) << " mean=" << fmt_g(e.sample_mean)
                << " lower_cl=" << fmt_g(e.lower_cl);
        } else {
            rep << ": bracket=[" << fmt_g(e.prediction.lower) << ", " << fmt_g(e.prediction.upper)
                << "] fraction_inside=" << fmt_g(e.fraction_inside)
                << " mean=" << fmt_g(e.sample_mean) << (e.mean_inside ? "" : " (mean outside)");
        }
        rep << "\n";
    }

    // Potential-based checks, LeadingOnes only: the expected-potential bound
    // with the analytic survival curve, and the additive bound on the
    // adjusted distance with the empirical curve.
    if (cfg.problem == db::Problem::leading_ones) {
        const db::PotentialTable g = db::build_potential(
            db::exact_lo_drift_function(cfg.n), 1.0, cfg.n, db::PotentialSource::discrete_sum);
        double e_g0 = 0.0; // E[g(X_0)] under the uniform initial string
        for (int k = 0; k < cfg.n; ++k)
            e_g0 += std::ldexp(1.0, -(k + 1)) * g(cfg.n - k);
        const double et = db::expected_opt_time_lo(cfg.n);

        for (std::size_t k = 0; k < cfg.checkpoints.size(); ++k) {
            const std::uint64_t t = cfg.checkpoints[k];
            if (t == 0) continue;
            const std::vector<int>& samples = stats.fitness[k];
            const double trials_d = static_cast<double>(samples.size());

            if (static_cast<double>(t) <= et && samples.size() >= 2) {
                const db::SurvivalCurve djwz = db::survival_from_djwz(cfg.n, t);
                const double bound = e_g0 - djwz.sum();
                std::vector<double> gs(samples.size());
                for (std::size_t i = 0; i < samples.size(); ++i)
                    gs[i] = g(cfg.n - samples[i]);
                const double mg = db::mean(gs);
                const double se = std::sqrt(db::sample_variance(gs) / trials_d);
                const bool pass = mg - z99 * se <= bound;
                all_pass = all_pass && pass;
                rep << (pass ? "[PASS] " : "[FAIL] ") << "thm41_potential t=" << t
                    << ": mean_g=" << fmt_g(mg) << " bound=" << fmt_g(bound)
                    << " (survival: " << djwz.source << ")\n";
            }

            if (samples.size() >= 2) {
                const db::SurvivalCurve emp = db::empirical_survival(stats, t);
                const double delta = 2.0 / (std::exp(1.0) * static_cast<double>(cfg.n));
                const double bound =
                    db::additive_bound(static_cast<double>(cfg.n), delta, emp);
                std::vector<double> adj(samples.size());
                for (std::size_t i = 0; i < samples.size(); ++i)
                    adj[i] = samples[i] == cfg.n
                                 ? 0.0
                                 : static_cast<double>(cfg.n + 1 - samples[i]);
                const double ma = db::mean(adj);
                const double se = std::sqrt(db::sample_variance(adj) / trials_d);
                const bool pass = ma - z99 * se <= bound;
                all_pass = all_pass && pass;
                rep << (pass ? "[PASS] " : "[FAIL] ") << "thm42_additive t=" << t
                    << ": mean_adjusted_distance=" << fmt_g(ma) << " bound=" << fmt_g(bound)
                    << " (survival: " << emp.source << ")\n";
            }
        }
    }

    rep << "summary: " << (all_pass ? "ALL PASS" : "BOUND VIOLATIONS PRESENT") << "\n";

    const std::string text = rep.str();
    std::cout << text;
    write_text(fs::path(cfg.output_dir) / "report.txt", text);
    return all_pass ? 0 : 1;
}

int cmd_mgf_check(const std::vector<int>& ns, double r_raw, double r_over_n, int grid_points,
                  const std::string& out_dir) {
    std::ostringstream rep;
    rep << "mgf drift-bound calibration\n";
    rep << "lambda grid: " << grid_points << " log-spaced points in [1/n^2, 1/(2en)]\n";
    std::vector<double> cs;
    for (int n : ns) {
        if (n < 10) throw std::invalid_argument("mgf-check: n must be >= 10");
        const double r = r_raw + r_over_n / static_cast<double>(n);
        const double c = db::verify_mgf_drift_bound(n, db::default_lambda_grid(n, grid_points), r);
        cs.push_back(c);
        rep << "n=" << n << " r=" << fmt_g(r) << " c=" << fmt_g(c)
            << " bracket_constant=" << fmt_g(db::calibrated_bracket_constant(c)) << "\n";
    }
    if (cs.size() >= 2) {
        double sum = 0.0;
        for (double c : cs) sum += c;
        const double m = sum / static_cast<double>(cs.size());
        double dev = 0.0;
        for (double c : cs) dev = std::max(dev, std::fabs(c - m) / m);
        rep << "max deviation from mean: " << fmt_g(dev * 100.0) << "% (band of +-20%: "
            << (dev <= 0.20 ? "within" : "exceeded") << ")\n";
    }
    const std::string text = rep.str();
    std::cout << text;
    if (!out_dir.empty()) write_text(fs::path(out_dir) / "mgf_check.txt", text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-budget drift analysis toolkit for the (1+1) EA"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed = 0;
    int workers_flag = 0;
    std::vector<int> mgf_ns{100, 200, 400};
    double mgf_r = 0.0;
    double mgf_r_over_n = 0.0;
    int mgf_grid = 33;

    CLI::App* sim = app.add_subcommand("simulate", "run an ensemble, write statistics CSVs");
    CLI::App* bounds = app.add_subcommand("bounds", "evaluate bound formulas over checkpoints");
    CLI::App* verify = app.add_subcommand("verify", "run an ensemble and check bounds; "
                                                    "exit 1 on violation");
    CLI::App* mgf = app.add_subcommand("mgf-check", "calibrate the mgf drift-bound constant");

    CLI::Option* seed_opts[3];
    int idx = 0;
    for (CLI::App* sub : {sim, bounds, verify}) {
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_override, "override the config's output_dir");
        seed_opts[idx++] = sub->add_option("--seed", seed, "override the config's master_seed");
    }
    for (CLI::App* sub : {sim, verify})
        sub->add_option("--workers", workers_flag,
                        "worker threads (default: DRIFTBUDGET_WORKERS or hardware)");
    mgf->add_option("--n", mgf_ns, "problem sizes")->delimiter(',');
    CLI::Option* r_opt = mgf->add_option("--r", mgf_r, "submartingale offset r (raw value)");
    CLI::Option* ron_opt =
        mgf->add_option("--r-over-n", mgf_r_over_n, "submartingale offset numerator: r = value/n");
    r_opt->excludes(ron_opt);
    mgf->add_option("--grid", mgf_grid, "lambda grid points")->check(CLI::Range(2, 100000));
    mgf->add_option("--out", out_override, "also write the report to this directory");

    try {
        app.parse(argc, argv);
        const bool seed_given =
            seed_opts[0]->count() > 0 || seed_opts[1]->count() > 0 || seed_opts[2]->count() > 0;
        if (app.got_subcommand(sim))
            return cmd_simulate(load_with_overrides(config_path, seed_given, seed, out_override),
                                resolve_workers(workers_flag));
        if (app.got_subcommand(bounds))
            return cmd_bounds(load_with_overrides(config_path, seed_given, seed, out_override));
        if (app.got_subcommand(verify))
            return cmd_verify(load_with_overrides(config_path, seed_given, seed, out_override),
                              resolve_workers(workers_flag));
        if (app.got_subcommand(mgf))
            return cmd_mgf_check(mgf_ns, mgf_r, mgf_r_over_n, mgf_grid, out_override);
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const db::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
