#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftbudget/fitness.hpp"
#include "driftbudget/montecarlo.hpp"

namespace driftbudget {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Experiment description parsed from a key = value text file. Comment lines
// start with '#'; unknown keys are rejected with the offending line number.
struct ExperimentConfig {
    Problem problem = Problem::one_max;
    int n = 0;
    std::uint64_t trials = 0;
    Budget budget; // empty: run to the optimum
    std::vector<std::uint64_t> checkpoints;
    std::uint64_t master_seed = 1;
    std::string simulator = "bit"; // "bit" or "fast-lo"
    std::string output_dir = "out";
    std::map<std::string, double> constants;

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_u64(const std::string& s, int line, const std::string& key) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("config line " + std::to_string(line) + ": " + key +
                          " expects an unsigned integer, got '" + s + "'");
    return v;
}

inline double parse_double(const std::string& s, int line, const std::string& key) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("config line " + std::to_string(line) + ": " + key +
                          " expects a number, got '" + s + "'");
    return v;
}

} // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool seen_problem = false, seen_n = false, seen_trials = false;
    std::map<std::string, int> seen_lines;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string stripped = detail::trim(raw);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line) +
                              ": expected 'key = value', got '" + stripped + "'");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line) + ": empty key");
        if (auto it = seen_lines.find(key); it != seen_lines.end())
            throw ConfigError("config line " + std::to_string(line) + ": duplicate key '" + key +
                              "' (first on line " + std::to_string(it->second) + ")");
        seen_lines[key] = line;

        if (key == "problem") {
            try {
                cfg.problem = problem_from_name(value);
            } catch (const std::invalid_argument&) {
                throw ConfigError("config line " + std::to_string(line) +
                                  ": problem must be onemax or leadingones, got '" + value + "'");
            }
            seen_problem = true;
        } else if (key == "n") {
            const std::uint64_t v = detail::parse_u64(value, line, key);
            if (v < 1 || v > 1000000000ULL)
                throw ConfigError("config line " + std::to_string(line) +
                                  ": n must be in [1, 10^9]");
            cfg.n = static_cast<int>(v);
            seen_n = true;
        } else if (key == "trials") {
            cfg.trials = detail::parse_u64(value, line, key);
            if (cfg.trials < 1)
                throw ConfigError("config line " + std::to_string(line) +
                                  ": trials must be positive");
            seen_trials = true;
        } else if (key == "budget") {
            if (value == "unbounded") {
                cfg.budget.reset();
            } else {
                const std::uint64_t v = detail::parse_u64(value, line, key);
                if (v < 1)
                    throw ConfigError("config line " + std::to_string(line) +
                                      ": budget must be positive or 'unbounded'");
                cfg.budget = v;
            }
        } else if (key == "checkpoints") {
            cfg.checkpoints.clear();
            std::string rest = value;
            while (!rest.empty()) {
                const std::size_t comma = rest.find(',');
                const std::string tok = detail::trim(rest.substr(0, comma));
                if (!tok.empty()) cfg.checkpoints.push_back(detail::parse_u64(tok, line, key));
                if (comma == std::string::npos) break;
                rest = rest.substr(comma + 1);
            }
            for (std::size_t i = 1; i < cfg.checkpoints.size(); ++i)
                if (cfg.checkpoints[i] <= cfg.checkpoints[i - 1])
                    throw ConfigError("config line " + std::to_string(line) +
                                      ": checkpoints must be strictly increasing");
        } else if (key == "master_seed") {
            cfg.master_seed = detail::parse_u64(value, line, key);
        } else if (key == "simulator") {
            if (value != "bit" && value != "fast-lo")
                throw ConfigError("config line " + std::to_string(line) +
                                  ": simulator must be 'bit' or 'fast-lo'");
            cfg.simulator = value;
        } else if (key == "output_dir") {
            if (value.empty())
                throw ConfigError("config line " + std::to_string(line) +
                                  ": output_dir must not be empty");
            cfg.output_dir = value;
        } else if (key.rfind("constant.", 0) == 0) {
            const std::string name = key.substr(9);
            if (name.empty())
                throw ConfigError("config line " + std::to_string(line) +
                                  ": constant key needs a name after 'constant.'");
            cfg.constants[name] = detail::parse_double(value, line, key);
        } else {
            throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key +
                              "'");
        }
    }

    if (!seen_problem) throw ConfigError("config: missing required key 'problem'");
    if (!seen_n) throw ConfigError("config: missing required key 'n'");
    if (!seen_trials) throw ConfigError("config: missing required key 'trials'");
    if (cfg.budget && !cfg.checkpoints.empty() && cfg.checkpoints.back() > *cfg.budget)
        throw ConfigError("config: checkpoints must not exceed the budget");
    if (cfg.simulator == "fast-lo" && cfg.problem != Problem::leading_ones)
        throw ConfigError("config: simulator fast-lo requires problem leadingones");
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "problem = " << problem_name(cfg.problem) << "\n";
    out << "n = " << cfg.n << "\n";
    out << "trials = " << cfg.trials << "\n";
    out << "budget = ";
    if (cfg.budget) out << *cfg.budget;
    else out << "unbounded";
    out << "\n";
    out << "checkpoints = ";
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
        if (i) out << ",";
        out << cfg.checkpoints[i];
    }
    out << "\n";
    out << "master_seed = " << cfg.master_seed << "\n";
    out << "simulator = " << cfg.simulator << "\n";
    out << "output_dir = " << cfg.output_dir << "\n";
    for (const auto& [name, value] : cfg.constants) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out << "constant." << name << " = " << buf << "\n";
    }
    return out.str();
}

inline EnsembleConfig to_ensemble_config(const ExperimentConfig& cfg) {
    EnsembleConfig e;
    e.problem = cfg.problem;
    e.n = cfg.n;
    e.trials = cfg.trials;
    e.budget = cfg.budget;
    e.checkpoints = cfg.checkpoints;
    e.master_seed = cfg.master_seed;
    e.fast_lo = cfg.simulator == "fast-lo";
    return e;
}

} // namespace driftbudget
