#pragma once

/// @file config.hpp
/// Parameters-file handling for the batch harness. The format is
/// line-oriented `key = value`, `#` starts a comment, blank lines are
/// ignored and keys are case-sensitive. Unknown keys are hard errors:
/// a silently ignored typo in a parameter file is exactly the failure mode
/// the parameter-less strategy exists to avoid.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pea/core.hpp"
#include "pea/engines.hpp"
#include "pea/problems.hpp"
#include "pea/race.hpp"

namespace pea {

/// Effective settings of one experiment batch.
struct RunConfig {
    ProblemId problem_id = ProblemId::OneMax;
    std::size_t string_size = 0;
    std::optional<std::size_t> trap_k;
    double sigma = 0.0;
    EngineId engine_id = EngineId::Sga;
    std::optional<std::string> ea_param_file; // resolved path
    std::uint64_t initial_population_size = 10;
    std::size_t num_runs = 1;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    StopCriteria stopper;
    std::string output_dir = ".";
    EngineConfig engine_config;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<KeyValue> parse_key_values(std::string_view text, const std::string& source) {
    std::vector<KeyValue> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                                : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(source + ":" + std::to_string(line_no) +
                              ": malformed line, expected 'key = value'");
        std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(source + ":" + std::to_string(line_no) +
                              ": malformed line, expected 'key = value'");
        out.push_back({std::string(key), std::string(value), line_no});
    }
    return out;
}

inline std::string where(const std::string& source, const KeyValue& kv) {
    return source + ":" + std::to_string(kv.line) + ": key '" + kv.key + "'";
}

inline std::uint64_t parse_u64(const std::string& source, const KeyValue& kv) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), v);
    if (ec != std::errc() || ptr != kv.value.data() + kv.value.size())
        throw ConfigError(where(source, kv) + ": invalid non-negative integer '" + kv.value + "'");
    return v;
}

inline int parse_int(const std::string& source, const KeyValue& kv) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), v);
    if (ec != std::errc() || ptr != kv.value.data() + kv.value.size())
        throw ConfigError(where(source, kv) + ": invalid integer '" + kv.value + "'");
    return v;
}

inline double parse_double(const std::string& source, const KeyValue& kv) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), v);
    if (ec != std::errc() || ptr != kv.value.data() + kv.value.size())
        throw ConfigError(where(source, kv) + ": invalid number '" + kv.value + "'");
    return v;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_exact(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

/// Per-engine parameter files (the SGAParameters.txt / UMDAParameters.txt /
/// ECGAParameters.txt analogs). Keys: tournamentSize, crossoverProbability,
/// crossoverKind (uniform | onePoint), selectedSetFraction, maxEcgaGroupSize.
inline EngineConfig parse_engine_config_text(std::string_view text, const std::string& source) {
    EngineConfig config;
    for (const auto& kv : detail::parse_key_values(text, source)) {
        if (kv.key == "tournamentSize") {
            config.tournament_size = static_cast<std::size_t>(detail::parse_u64(source, kv));
        } else if (kv.key == "crossoverProbability") {
            config.crossover_probability = detail::parse_double(source, kv);
        } else if (kv.key == "crossoverKind") {
            if (kv.value == "uniform")
                config.crossover_kind = CrossoverKind::Uniform;
            else if (kv.value == "onePoint")
                config.crossover_kind = CrossoverKind::OnePoint;
            else
                throw ConfigError(detail::where(source, kv) +
                                  ": expected 'uniform' or 'onePoint', got '" + kv.value + "'");
        } else if (kv.key == "selectedSetFraction") {
            config.selected_set_fraction = detail::parse_double(source, kv);
        } else if (kv.key == "maxEcgaGroupSize") {
            config.max_ecga_group_size = static_cast<std::size_t>(detail::parse_u64(source, kv));
        } else {
            throw ConfigError(source + ":" + std::to_string(kv.line) + ": unknown key '" +
                              kv.key + "'");
        }
    }
    config.validate();
    return config;
}

inline EngineConfig parse_engine_config(const std::filesystem::path& path) {
    return parse_engine_config_text(detail::read_file(path), path.string());
}

/// Parses the main parameters file. Required keys: problemType, stringSize,
/// eAlg. Relative eaParamFile paths resolve against `base_dir` (the config
/// file's own directory when loading from disk).
inline RunConfig parse_run_config_text(std::string_view text, const std::string& source,
                                       const std::filesystem::path& base_dir = ".") {
    auto pairs = detail::parse_key_values(text, source);

    bool saw_problem = false, saw_size = false, saw_alg = false;
    RunConfig config;
    for (const auto& kv : pairs) {
        if (kv.key == "problemType") {
            int id = detail::parse_int(source, kv);
            auto problem = problem_from_menu(id);
            if (!problem)
                throw ConfigError(detail::where(source, kv) + ": unknown problemType " +
                                  std::to_string(id));
            config.problem_id = *problem;
            saw_problem = true;
        } else if (kv.key == "stringSize") {
            config.string_size = static_cast<std::size_t>(detail::parse_u64(source, kv));
            if (config.string_size == 0)
                throw ConfigError(detail::where(source, kv) + ": stringSize must be >= 1");
            saw_size = true;
        } else if (kv.key == "trapK") {
            config.trap_k = static_cast<std::size_t>(detail::parse_u64(source, kv));
        } else if (kv.key == "sigmaK") {
            config.sigma = detail::parse_double(source, kv);
            if (config.sigma < 0.0)
                throw ConfigError(detail::where(source, kv) + ": sigmaK must be >= 0");
        } else if (kv.key == "eAlg") {
            int id = detail::parse_int(source, kv);
            auto engine = engine_from_menu(id);
            if (!engine)
                throw ConfigError(detail::where(source, kv) + ": unknown eAlg " +
                                  std::to_string(id));
            config.engine_id = *engine;
            saw_alg = true;
        } else if (kv.key == "eaParamFile") {
            std::filesystem::path p(kv.value);
            if (p.is_relative())
                p = base_dir / p;
            config.ea_param_file = p.lexically_normal().string();
        } else if (kv.key == "N0") {
            config.initial_population_size = detail::parse_u64(source, kv);
            if (config.initial_population_size == 0)
                throw ConfigError(detail::where(source, kv) + ": N0 must be >= 1");
        } else if (kv.key == "numRuns") {
            config.num_runs = static_cast<std::size_t>(detail::parse_u64(source, kv));
            if (config.num_runs == 0)
                throw ConfigError(detail::where(source, kv) + ": numRuns must be >= 1");
        } else if (kv.key == "seed") {
            config.seed = detail::parse_u64(source, kv);
        } else if (kv.key == "threads") {
            config.threads = static_cast<std::size_t>(detail::parse_u64(source, kv));
            if (config.threads == 0)
                throw ConfigError(detail::where(source, kv) + ": threads must be >= 1");
        } else if (kv.key == "maxEvaluations") {
            config.stopper.max_evaluations = detail::parse_u64(source, kv);
        } else if (kv.key == "targetFitness") {
            config.stopper.target_fitness = detail::parse_double(source, kv);
        } else if (kv.key == "targetTolerance") {
            config.stopper.target_tolerance = detail::parse_double(source, kv);
            if (config.stopper.target_tolerance < 0.0)
                throw ConfigError(detail::where(source, kv) + ": targetTolerance must be >= 0");
        } else if (kv.key == "maxLadderIndex") {
            config.stopper.max_ladder_index =
                static_cast<std::size_t>(detail::parse_u64(source, kv));
        } else if (kv.key == "maxWallClockSeconds") {
            double seconds = detail::parse_double(source, kv);
            if (seconds <= 0.0)
                throw ConfigError(detail::where(source, kv) +
                                  ": maxWallClockSeconds must be > 0");
            config.stopper.max_wall_clock = std::chrono::duration<double>(seconds);
        } else if (kv.key == "maxStepsOfLargest") {
            config.stopper.max_steps_of_largest = detail::parse_u64(source, kv);
        } else if (kv.key == "outputDir") {
            config.output_dir = kv.value;
        } else {
            throw ConfigError(source + ":" + std::to_string(kv.line) + ": unknown key '" +
                              kv.key + "'");
        }
    }

    if (!saw_problem || !saw_size || !saw_alg) {
        std::string missing;
        if (!saw_problem)
            missing += " problemType";
        if (!saw_size)
            missing += " stringSize";
        if (!saw_alg)
            missing += " eAlg";
        throw ConfigError(source + ": missing required key(s):" + missing);
    }

    bool is_trap =
        config.problem_id == ProblemId::TrapK || config.problem_id == ProblemId::ZeroTrapK;
    if (is_trap && !config.trap_k)
        throw ConfigError(source + ": problemType " +
                          std::to_string(static_cast<int>(config.problem_id)) +
                          " requires key 'trapK'");

    // Validate string size / block structure eagerly so mistakes surface at
    // parse time rather than mid-batch.
    ProblemInstance probe(config.problem_id, config.string_size, config.trap_k.value_or(0),
                          0.0, RngStream(0));
    (void)probe;

    if (config.ea_param_file)
        config.engine_config = parse_engine_config(*config.ea_param_file);

    return config;
}

inline RunConfig parse_run_config(const std::filesystem::path& path) {
    std::filesystem::path base = path.parent_path();
    if (base.empty())
        base = ".";
    return parse_run_config_text(detail::read_file(path), path.string(), base);
}

/// Emits every effective setting (including defaults) in the same key =
/// value format, such that parsing the result reproduces the configuration.
inline std::string serialize(const RunConfig& config) {
    std::string out;
    auto emit = [&](std::string_view key, const std::string& value) {
        out += std::string(key) + " = " + value + "\n";
    };
    emit("problemType", std::to_string(static_cast<int>(config.problem_id)));
    emit("stringSize", std::to_string(config.string_size));
    if (config.trap_k)
        emit("trapK", std::to_string(*config.trap_k));
    emit("sigmaK", detail::format_exact(config.sigma));
    emit("eAlg", std::to_string(static_cast<int>(config.engine_id)));
    if (config.ea_param_file)
        emit("eaParamFile", *config.ea_param_file);
    emit("N0", std::to_string(config.initial_population_size));
    emit("numRuns", std::to_string(config.num_runs));
    emit("seed", std::to_string(config.seed));
    emit("threads", std::to_string(config.threads));
    if (config.stopper.max_evaluations)
        emit("maxEvaluations", std::to_string(*config.stopper.max_evaluations));
    if (config.stopper.target_fitness)
        emit("targetFitness", detail::format_exact(*config.stopper.target_fitness));
    emit("targetTolerance", detail::format_exact(config.stopper.target_tolerance));
    if (config.stopper.max_ladder_index)
        emit("maxLadderIndex", std::to_string(*config.stopper.max_ladder_index));
    if (config.stopper.max_wall_clock)
        emit("maxWallClockSeconds", detail::format_exact(config.stopper.max_wall_clock->count()));
    if (config.stopper.max_steps_of_largest)
        emit("maxStepsOfLargest", std::to_string(*config.stopper.max_steps_of_largest));
    emit("outputDir", config.output_dir);
    return out;
}

} // namespace pea
