#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "pea/config.hpp"

using namespace pea;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& contents) {
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "pea_config_tests";
    std::filesystem::create_directories(dir);
    std::filesystem::path p = dir / name;
    std::ofstream out(p, std::ios::trunc);
    out << contents;
    return p;
}

} // namespace

TEST_CASE("minimal config selects problem and engine") {
    RunConfig config = parse_run_config_text("problemType = 10\nstringSize = 50\neAlg = 0", "t");
    REQUIRE(config.problem_id == ProblemId::OneMax);
    REQUIRE(config.string_size == 50);
    REQUIRE(config.engine_id == EngineId::Sga);
    // Documented defaults.
    REQUIRE(config.initial_population_size == 10);
    REQUIRE(config.num_runs == 1);
    REQUIRE(config.seed == 1);
    REQUIRE(config.sigma == 0.0);
    REQUIRE(config.output_dir == ".");
    REQUIRE_FALSE(config.stopper.any());
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
    const char* text = "# experiment setup\n"
                       "\n"
                       "problemType = 12   # 3-deceptive\n"
                       "stringSize=30\n"
                       "  eAlg =  1\n"
                       "\tseed = 7\n";
    RunConfig config = parse_run_config_text(text, "t");
    REQUIRE(config.problem_id == ProblemId::Deceptive3);
    REQUIRE(config.string_size == 30);
    REQUIRE(config.engine_id == EngineId::Umda);
    REQUIRE(config.seed == 7);
}

TEST_CASE("unknown problem id names the key and line") {
    try {
        parse_run_config_text("problemType = 99\nstringSize = 10\neAlg = 0", "params.txt");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        REQUIRE(msg.find("params.txt:1") != std::string::npos);
        REQUIRE(msg.find("problemType") != std::string::npos);
        REQUIRE(msg.find("99") != std::string::npos);
    }
}

TEST_CASE("unknown engine id is rejected") {
    REQUIRE_THROWS_AS(parse_run_config_text("problemType = 10\nstringSize = 10\neAlg = 9", "t"),
                      ConfigError);
}

TEST_CASE("empty file lists the required keys") {
    try {
        parse_run_config_text("", "empty.txt");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        REQUIRE(msg.find("problemType") != std::string::npos);
        REQUIRE(msg.find("stringSize") != std::string::npos);
        REQUIRE(msg.find("eAlg") != std::string::npos);
    }
}

TEST_CASE("unknown keys are hard errors with their line number") {
    try {
        parse_run_config_text("problemType = 10\nstringSize = 10\neAlg = 0\npopsize = 3", "p");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        REQUIRE(msg.find("p:4") != std::string::npos);
        REQUIRE(msg.find("popsize") != std::string::npos);
    }
}

TEST_CASE("malformed lines and bad values carry line numbers") {
    REQUIRE_THROWS_AS(parse_run_config_text("problemType\nstringSize = 10\neAlg = 0", "t"),
                      ConfigError);
    REQUIRE_THROWS_AS(
        parse_run_config_text("problemType = ten\nstringSize = 10\neAlg = 0", "t"), ConfigError);
    REQUIRE_THROWS_AS(
        parse_run_config_text("problemType = 10\nstringSize = -5\neAlg = 0", "t"), ConfigError);
    REQUIRE_THROWS_AS(
        parse_run_config_text("problemType = 10\nstringSize = 10\neAlg = 0\nsigmaK = -1", "t"),
        ConfigError);
}

TEST_CASE("trap problems require trapK") {
    REQUIRE_THROWS_AS(parse_run_config_text("problemType = 15\nstringSize = 12\neAlg = 0", "t"),
                      ConfigError);
    RunConfig config =
        parse_run_config_text("problemType = 15\nstringSize = 12\ntrapK = 4\neAlg = 0", "t");
    REQUIRE(config.trap_k == 4);
}

TEST_CASE("block structure is validated at parse time") {
    REQUIRE_THROWS_AS(parse_run_config_text("problemType = 12\nstringSize = 10\neAlg = 0", "t"),
                      ConfigError);
}

TEST_CASE("stop criteria keys populate the stopper") {
    const char* text = "problemType = 10\nstringSize = 20\neAlg = 0\n"
                       "maxEvaluations = 100000\ntargetFitness = 20\ntargetTolerance = 1e-6\n"
                       "maxLadderIndex = 12\nmaxWallClockSeconds = 3.5\nmaxStepsOfLargest = 9";
    RunConfig config = parse_run_config_text(text, "t");
    REQUIRE(config.stopper.max_evaluations == 100000);
    REQUIRE(config.stopper.target_fitness == 20.0);
    REQUIRE(config.stopper.target_tolerance == 1e-6);
    REQUIRE(config.stopper.max_ladder_index == 12);
    REQUIRE(config.stopper.max_wall_clock->count() == 3.5);
    REQUIRE(config.stopper.max_steps_of_largest == 9);
    REQUIRE(config.stopper.any());
}

TEST_CASE("engine parameter file is loaded relative to the config file") {
    write_temp("CustomSGAParameters.txt", "tournamentSize = 2\ncrossoverProbability = 0.9\n"
                                          "crossoverKind = onePoint\n");
    auto config_path = write_temp("pea.txt", "problemType = 10\nstringSize = 10\neAlg = 0\n"
                                             "eaParamFile = CustomSGAParameters.txt\n");
    RunConfig config = parse_run_config(config_path);
    REQUIRE(config.engine_config.tournament_size == 2);
    REQUIRE(config.engine_config.crossover_probability == 0.9);
    REQUIRE(config.engine_config.crossover_kind == CrossoverKind::OnePoint);
    // Untouched keys keep their robust defaults.
    REQUIRE(config.engine_config.selected_set_fraction == 0.5);
    REQUIRE(config.engine_config.max_ecga_group_size == 8);
}

TEST_CASE("engine parameter validation") {
    REQUIRE_THROWS_AS(parse_engine_config_text("tournamentSize = 0", "e"), ConfigError);
    REQUIRE_THROWS_AS(parse_engine_config_text("crossoverProbability = 1.5", "e"), ConfigError);
    REQUIRE_THROWS_AS(parse_engine_config_text("selectedSetFraction = 0", "e"), ConfigError);
    REQUIRE_THROWS_AS(parse_engine_config_text("maxEcgaGroupSize = 40", "e"), ConfigError);
    REQUIRE_THROWS_AS(parse_engine_config_text("crossoverKind = twoPoint", "e"), ConfigError);
    REQUIRE_THROWS_AS(parse_engine_config_text("mutationRate = 0.1", "e"), ConfigError);
}

TEST_CASE("missing files are reported") {
    REQUIRE_THROWS_AS(parse_run_config("/nonexistent/pea.txt"), ConfigError);
    REQUIRE_THROWS_AS(
        parse_run_config_text(
            "problemType = 10\nstringSize = 10\neAlg = 0\neaParamFile = /nonexistent/sga.txt",
            "t"),
        ConfigError);
}

TEST_CASE("config round-trip reproduces every effective setting") {
    write_temp("RoundTripEngine.txt", "tournamentSize = 6\n");
    auto path = write_temp("roundtrip.txt",
                           "problemType = 15\nstringSize = 32\ntrapK = 4\nsigmaK = 0.25\n"
                           "eAlg = 2\neaParamFile = RoundTripEngine.txt\nN0 = 20\n"
                           "numRuns = 5\nseed = 99\nthreads = 2\nmaxEvaluations = 123456\n"
                           "targetFitness = 8\noutputDir = out\n");
    RunConfig first = parse_run_config(path);
    std::string serialized = serialize(first);
    RunConfig second = parse_run_config_text(serialized, "serialized");
    REQUIRE(first == second);

    // Serializing the default-heavy minimal config also round-trips.
    RunConfig minimal = parse_run_config_text("problemType = 10\nstringSize = 50\neAlg = 0", "t");
    REQUIRE(parse_run_config_text(serialize(minimal), "s") == minimal);
}
