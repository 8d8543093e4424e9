#pragma once

/// @file runner.hpp
/// Batch experiment driver: runs single or multiple seeded races, streams
/// per-step events to a sink, and writes the run-log and statistics files.
///
/// Output files (tab-separated, locale-independent, reals at 15 significant
/// digits):
///
///   PARAMETERLESS_<engine>_<problem>.txt        one row per race step
///   PARAMETERLESS-STATS_<engine>_<problem>.txt  one row per run + summary
///
/// Runs are seeded with (seed + runIndex), so a batch is reproducible and
/// the files are byte-identical however many worker threads execute it.

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pea/config.hpp"
#include "pea/core.hpp"
#include "pea/engines.hpp"
#include "pea/problems.hpp"
#include "pea/race.hpp"

namespace pea {

/// Stream ids hung off the per-run seed: each ladder slot owns stream
/// `slot index`, problem noise draws from a stream no slot can reach.
inline constexpr std::uint64_t kNoiseStreamId = std::uint64_t{1} << 32;

/// Per-run outcome. `success` means the target-fitness criterion fired.
struct RunStats {
    std::size_t run_index = 0;
    bool success = false;
    std::optional<std::uint64_t> evals_to_target;
    double best_fitness = 0.0;
    std::uint64_t largest_population_size = 0;
    std::uint64_t steps_executed = 0;
    double wall_clock_seconds = 0.0;
    std::optional<StopReason> stop_reason;
    std::optional<std::string> error;
};

/// Receives every step event of a run, tagged with the run index.
class StepSink {
  public:
    virtual ~StepSink() = default;
    virtual void on_step(std::size_t run_index, const StepEvent& event) = 0;
};

class NullSink final : public StepSink {
  public:
    void on_step(std::size_t, const StepEvent&) override {}
};

/// Keeps every event in memory; handy for tests and post-processing.
class CollectingSink final : public StepSink {
  public:
    explicit CollectingSink(std::size_t num_runs) : events_(num_runs) {}

    void on_step(std::size_t run_index, const StepEvent& event) override {
        events_[run_index].push_back(event);
    }

    const std::vector<std::vector<StepEvent>>& events() const noexcept { return events_; }

  private:
    std::vector<std::vector<StepEvent>> events_;
};

namespace detail {

/// 15-significant-digit general formatting via to_chars: locale-independent
/// and identical on every platform.
inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 15);
    return std::string(buf, ptr);
}

inline std::string event_flags(const StepEvent& event) {
    std::string out;
    if (event.created_slot)
        out += "CREATE";
    if (!event.eliminated.empty()) {
        if (!out.empty())
            out += ';';
        out += event.elimination_kind == EliminationKind::Converged ? "ELIM-CONV:"
                                                                    : "ELIM-CATCHUP:";
        for (std::size_t i = 0; i < event.eliminated.size(); ++i) {
            if (i > 0)
                out += ',';
            out += std::to_string(event.eliminated[i]);
        }
    }
    if (out.empty())
        out = "-";
    return out;
}

inline std::string format_log_row(std::size_t run_index, const StepEvent& e) {
    std::string row = std::to_string(run_index);
    row += '\t';
    row += std::to_string(e.step);
    row += '\t';
    row += std::to_string(e.slot_index);
    row += '\t';
    row += std::to_string(e.population_size);
    row += '\t';
    row += std::to_string(e.generation);
    row += '\t';
    row += format_real(e.average_fitness);
    row += '\t';
    row += format_real(e.best_fitness);
    row += '\t';
    row += std::to_string(e.total_evaluations);
    row += '\t';
    row += event_flags(e);
    row += '\n';
    return row;
}

inline constexpr std::string_view kLogHeader =
    "runIndex\tstep\tslotIndex\tpopSize\tgeneration\tavgFitness\tbestFitness\ttotalEvals\tevents\n";

inline constexpr std::string_view kStatsHeader =
    "runIndex\tsuccess\tevalsToTarget\tbestFitness\tlargestPopulationSize\tstepsExecuted\n";

/// Formats rows straight into one buffer per run, so worker threads never
/// contend and the final files do not depend on scheduling.
class LogBufferSink final : public StepSink {
  public:
    explicit LogBufferSink(std::size_t num_runs) : buffers_(num_runs) {}

    void on_step(std::size_t run_index, const StepEvent& event) override {
        buffers_[run_index] += format_log_row(run_index, event);
    }

    const std::vector<std::string>& buffers() const noexcept { return buffers_; }

  private:
    std::vector<std::string> buffers_;
};

/// Writes via a temporary file and renames into place; a failed write never
/// leaves a partial file behind.
inline void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << contents;
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("failed moving output into place at '" + path.string() + "'");
    }
}

} // namespace detail

/// Executes one seeded race to its stop criterion, streaming every step to
/// the sink. The run seed is config.seed + run_index.
inline RunStats run_single(const RunConfig& config, std::size_t run_index, StepSink& sink) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t run_seed = config.seed + static_cast<std::uint64_t>(run_index);

    ProblemInstance problem(config.problem_id, config.string_size, config.trap_k.value_or(0),
                            config.sigma, RngStream(run_seed, kNoiseStreamId));
    EvalCounter counter;
    SolverFactory factory = [&](std::uint64_t pop_size, std::size_t slot_index) {
        return make_solver(config.engine_id, static_cast<std::size_t>(pop_size), problem,
                           config.engine_config, RngStream(run_seed, slot_index), counter);
    };

    Race::Options options;
    options.initial_population_size = config.initial_population_size;
    Race race(std::move(factory), counter, options);

    race.start();
    std::optional<StopReason> reason = race.should_stop(config.stopper);
    while (!reason) {
        StepEvent event = race.run_one_step();
        sink.on_step(run_index, event);
        reason = race.should_stop(config.stopper);
    }

    RunStats stats;
    stats.run_index = run_index;
    stats.stop_reason = reason;
    stats.success = reason == StopReason::TargetFitness;
    if (stats.success)
        stats.evals_to_target = counter.total;
    stats.best_fitness = race.best_so_far() ? race.best_so_far()->fitness : 0.0;
    stats.largest_population_size = race.slots().empty() ? 0 : race.slots().back().size;
    stats.steps_executed = race.steps_executed();
    stats.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return stats;
}

/// Aggregates over a batch. Mean and standard deviation of evaluations are
/// over successful runs only (sample stddev, zero when fewer than two).
struct BatchSummary {
    double success_rate = 0.0;
    std::optional<double> mean_evals_to_target;
    std::optional<double> stddev_evals_to_target;
    double mean_largest_population = 0.0;
};

inline BatchSummary summarize(const std::vector<RunStats>& runs) {
    BatchSummary summary;
    if (runs.empty())
        return summary;

    std::size_t successes = 0;
    double sum_largest = 0.0;
    std::vector<double> evals;
    for (const auto& r : runs) {
        if (r.success) {
            ++successes;
            evals.push_back(static_cast<double>(*r.evals_to_target));
        }
        sum_largest += static_cast<double>(r.largest_population_size);
    }
    summary.success_rate = static_cast<double>(successes) / static_cast<double>(runs.size());
    summary.mean_largest_population = sum_largest / static_cast<double>(runs.size());
    if (!evals.empty()) {
        double mean = 0.0;
        for (double e : evals)
            mean += e;
        mean /= static_cast<double>(evals.size());
        summary.mean_evals_to_target = mean;
        double ss = 0.0;
        for (double e : evals)
            ss += (e - mean) * (e - mean);
        summary.stddev_evals_to_target =
            evals.size() > 1 ? std::sqrt(ss / static_cast<double>(evals.size() - 1)) : 0.0;
    }
    return summary;
}

struct BatchResult {
    std::vector<RunStats> runs;
    BatchSummary summary;
    std::filesystem::path log_path;
    std::filesystem::path stats_path;
};

namespace detail {

inline std::string format_stats_row(const RunStats& s) {
    std::string row = std::to_string(s.run_index);
    row += '\t';
    row += s.success ? '1' : '0';
    row += '\t';
    row += s.evals_to_target ? std::to_string(*s.evals_to_target) : std::string("-");
    row += '\t';
    row += format_real(s.best_fitness);
    row += '\t';
    row += std::to_string(s.largest_population_size);
    row += '\t';
    row += std::to_string(s.steps_executed);
    row += '\n';
    return row;
}

inline std::string format_stats_file(const std::vector<RunStats>& runs,
                                     const BatchSummary& summary) {
    std::string out(kStatsHeader);
    for (const auto& r : runs)
        out += format_stats_row(r);
    out += "# successRate = " + format_real(summary.success_rate) + "\n";
    if (summary.mean_evals_to_target) {
        out += "# meanEvalsToTarget = " + format_real(*summary.mean_evals_to_target) + "\n";
        out += "# stddevEvalsToTarget = " + format_real(*summary.stddev_evals_to_target) + "\n";
    }
    out += "# meanLargestPopulationSize = " + format_real(summary.mean_largest_population) + "\n";
    return out;
}

} // namespace detail

/// Output file names: the paper's two wildcard fields are filled with the
/// engine and problem names.
inline std::string log_file_name(const RunConfig& config) {
    return "PARAMETERLESS_" + std::string(engine_name(config.engine_id)) + "_" +
           std::string(problem_name(config.problem_id)) + ".txt";
}

inline std::string stats_file_name(const RunConfig& config) {
    return "PARAMETERLESS-STATS_" + std::string(engine_name(config.engine_id)) + "_" +
           std::string(problem_name(config.problem_id)) + ".txt";
}

/// Runs the whole batch (numRuns races, `threads` workers) and writes both
/// output files. Individual run failures are recorded in their stats row and
/// the batch continues. Outputs are byte-identical for any thread count.
inline BatchResult run_batch(const RunConfig& config) {
    detail::LogBufferSink log_sink(config.num_runs);
    std::vector<RunStats> stats(config.num_runs);

    const std::size_t workers = std::min(config.threads, config.num_runs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < config.num_runs; ++i) {
            try {
                stats[i] = run_single(config, i, log_sink);
            } catch (const std::exception& ex) {
                stats[i].run_index = i;
                stats[i].error = ex.what();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= config.num_runs)
                    return;
                try {
                    stats[i] = run_single(config, i, log_sink);
                } catch (const std::exception& ex) {
                    stats[i].run_index = i;
                    stats[i].error = ex.what();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }

    BatchResult result;
    result.runs = std::move(stats);
    result.summary = summarize(result.runs);

    std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    result.log_path = dir / log_file_name(config);
    result.stats_path = dir / stats_file_name(config);

    std::string log_text(detail::kLogHeader);
    for (const auto& buffer : log_sink.buffers())
        log_text += buffer;
    detail::write_text_file(result.log_path, log_text);
    detail::write_text_file(result.stats_path,
                            detail::format_stats_file(result.runs, result.summary));
    return result;
}

} // namespace pea
