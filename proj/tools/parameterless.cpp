// Batch driver for the parameter-less evolutionary algorithms.
//
//   parameterless <parametersFile> [--out DIR] [--runs N] [--seed N] [--threads N]
//
// Exit code 0 on a completed batch, nonzero on configuration or I/O errors.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pea/pea.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Parameter-less evolutionary algorithm batch runner"};

    std::string parameters_file;
    app.add_option("parametersFile", parameters_file,
                   "Parameters file (key = value lines; see README)")
        ->required();

    std::string out_dir;
    auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides outputDir)");
    std::uint64_t runs = 0;
    auto* runs_opt = app.add_option("--runs", runs, "Number of runs (overrides numRuns)");
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Base seed (overrides seed)");
    std::uint64_t threads = 0;
    auto* threads_opt =
        app.add_option("--threads", threads, "Worker threads (overrides threads)");

    CLI11_PARSE(app, argc, argv);

    try {
        pea::RunConfig config = pea::parse_run_config(parameters_file);
        if (*out_opt)
            config.output_dir = out_dir;
        if (*runs_opt) {
            if (runs == 0)
                throw pea::ConfigError("--runs must be >= 1");
            config.num_runs = static_cast<std::size_t>(runs);
        }
        if (*seed_opt)
            config.seed = seed;
        if (*threads_opt) {
            if (threads == 0)
                throw pea::ConfigError("--threads must be >= 1");
            config.threads = static_cast<std::size_t>(threads);
        }

        // The race itself is designed to run forever; a command-line batch
        // must therefore name at least one stop criterion.
        if (!config.stopper.any())
            throw pea::ConfigError(
                parameters_file +
                ": no stop criterion set; add at least one of maxEvaluations, targetFitness, "
                "maxLadderIndex, maxWallClockSeconds, maxStepsOfLargest");

        pea::BatchResult result = pea::run_batch(config);

        std::cout << "engine " << pea::engine_name(config.engine_id) << ", problem "
                  << pea::problem_name(config.problem_id) << " (l=" << config.string_size
                  << "), runs " << config.num_runs << "\n";
        std::cout << "success rate: " << result.summary.success_rate << "\n";
        if (result.summary.mean_evals_to_target)
            std::cout << "evals to target: mean " << *result.summary.mean_evals_to_target
                      << ", stddev " << *result.summary.stddev_evals_to_target << "\n";
        std::cout << "mean largest population: " << result.summary.mean_largest_population
                  << "\n";
        std::cout << "run log: " << result.log_path.string() << "\n";
        std::cout << "stats:   " << result.stats_path.string() << "\n";

        for (const auto& run : result.runs)
            if (run.error)
                std::cerr << "run " << run.run_index << " failed: " << *run.error << "\n";
        return 0;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
