#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <vector>

#include "pea/engines.hpp"
#include "pea/problems.hpp"

using namespace pea;

namespace {

std::vector<std::vector<std::uint8_t>> genotypes(const Population& pop) {
    std::vector<std::vector<std::uint8_t>> out;
    for (const auto& m : pop)
        out.emplace_back(m.bits().begin(), m.bits().end());
    return out;
}

SelectedSet set_of(std::vector<std::vector<std::uint8_t>> rows) {
    SelectedSet sel;
    for (auto& r : rows)
        sel.members.push_back(Individual(std::move(r)));
    return sel;
}

} // namespace

TEST_CASE("make_solver: construction contract") {
    ProblemInstance onemax(ProblemId::OneMax, 12);
    EvalCounter counter;
    auto solver = make_solver(EngineId::Sga, 10, onemax, EngineConfig{}, RngStream(1), counter);
    REQUIRE(solver->population().size() == 10);
    for (const auto& member : solver->population())
        REQUIRE(member.evaluated());
    REQUIRE(counter.total == 10);
}

TEST_CASE("make_solver: population below two is a configuration error") {
    ProblemInstance onemax(ProblemId::OneMax, 12);
    EvalCounter counter;
    REQUIRE_THROWS_AS(
        make_solver(EngineId::Sga, 1, onemax, EngineConfig{}, RngStream(1), counter),
        ConfigError);
}

TEST_CASE("make_solver: identical seeds give identical initial populations") {
    ProblemInstance onemax(ProblemId::OneMax, 16);
    for (EngineId engine : {EngineId::Sga, EngineId::Umda, EngineId::Ecga}) {
        EvalCounter c1, c2;
        auto a = make_solver(engine, 20, onemax, EngineConfig{}, RngStream(7, 3), c1);
        auto b = make_solver(engine, 20, onemax, EngineConfig{}, RngStream(7, 3), c2);
        REQUIRE(genotypes(a->population()) == genotypes(b->population()));
    }
}

TEST_CASE("initial average fitness sits at the binomial expectation") {
    // OneMax l=20, N=64: initial average ~ Binomial(20, 1/2) mean 10.
    ProblemInstance onemax(ProblemId::OneMax, 20);
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        EvalCounter counter;
        auto solver =
            make_solver(EngineId::Umda, 64, onemax, EngineConfig{}, RngStream(seed), counter);
        sum += solver->population().average_fitness();
    }
    double mean = sum / 30.0;
    REQUIRE(mean >= 8.5);
    REQUIRE(mean <= 11.5);
}

TEST_CASE("tournament of size one deals out the population exactly once per pass") {
    RngStream rng(3);
    Population pop = Population::random(12, 6, rng);
    for (auto& m : pop)
        m.set_fitness(rng.next_double());

    SelectedSet sel = tournament_select(pop, 1, 12, rng);
    auto winners = genotypes(Population(sel.members));
    std::vector<std::vector<std::uint8_t>> source = genotypes(pop);
    std::sort(winners.begin(), winners.end());
    std::sort(source.begin(), source.end());
    REQUIRE(winners == source);
}

TEST_CASE("full tournament with one winner returns the best individual") {
    RngStream rng(4);
    Population pop = Population::random(9, 5, rng);
    double best = -1.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        pop[i].set_fitness(double(i % 5) + 0.25);
        best = std::max(best, pop[i].fitness());
    }
    for (int trial = 0; trial < 20; ++trial) {
        SelectedSet sel = tournament_select(pop, pop.size(), 1, rng);
        REQUIRE(sel.members[0].fitness() == best);
    }
}

TEST_CASE("equal fitness makes tournament selection uniform") {
    RngStream rng(5);
    std::vector<Individual> members;
    for (std::size_t i = 0; i < 8; ++i) {
        std::vector<std::uint8_t> bits(8, 0);
        bits[i] = 1; // unique genotype per member, equal fitness
        Individual ind((std::vector<std::uint8_t>(bits)));
        ind.set_fitness(1.0);
        members.push_back(std::move(ind));
    }
    Population pop(std::move(members));

    std::map<std::vector<std::uint8_t>, int> wins;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        SelectedSet sel = tournament_select(pop, 2, 8, rng);
        for (const auto& w : sel.members)
            wins[std::vector<std::uint8_t>(w.bits().begin(), w.bits().end())] += 1;
    }
    // 16000 wins over 8 members: expectation 2000 each; +-4 sigma ~ 170.
    for (const auto& [geno, count] : wins) {
        REQUIRE(count > 1700);
        REQUIRE(count < 2300);
    }
    REQUIRE(wins.size() == 8);
}

TEST_CASE("tournament size is validated") {
    RngStream rng(6);
    Population pop = Population::random(4, 3, rng);
    for (auto& m : pop)
        m.set_fitness(0.0);
    REQUIRE_THROWS_AS(tournament_select(pop, 0, 1, rng), ConfigError);
    REQUIRE_THROWS_AS(tournament_select(pop, 5, 1, rng), ConfigError);
}

TEST_CASE("SGA with pc = 0 only copies parents") {
    ProblemInstance onemax(ProblemId::OneMax, 10);
    EvalCounter counter;
    EngineConfig config;
    config.crossover_probability = 0.0;
    SgaSolver solver(20, onemax, config, RngStream(8), counter);

    auto parents = genotypes(solver.population());
    std::sort(parents.begin(), parents.end());
    GenerationReport report = solver.next_generation();

    // Copies carry their cached fitness, so nothing is re-evaluated.
    REQUIRE(report.evaluations_used == 0);
    REQUIRE(counter.total == 20);

    // No new genotypes: every offspring is a copy of some parent (selection
    // may copy one parent several times).
    for (const auto& genotype : genotypes(solver.population()))
        REQUIRE(std::binary_search(parents.begin(), parents.end(), genotype));
}

TEST_CASE("SGA replacement preserves the population size") {
    ProblemInstance onemax(ProblemId::OneMax, 8);
    EvalCounter counter;
    SgaSolver solver(15, onemax, EngineConfig{}, RngStream(9), counter);
    for (int g = 0; g < 5; ++g) {
        solver.next_generation();
        REQUIRE(solver.population().size() == 15);
    }
}

TEST_CASE("a converged population stays converged under every engine") {
    ProblemInstance onemax(ProblemId::OneMax, 4);
    for (EngineId engine : {EngineId::Sga, EngineId::Umda, EngineId::Ecga}) {
        EvalCounter counter;
        auto solver = make_solver(engine, 8, onemax, EngineConfig{}, RngStream(10), counter);
        GenerationReport report;
        int generations = 0;
        do {
            report = solver->next_generation();
            ++generations;
        } while (!report.converged && generations < 200);
        REQUIRE(report.converged);

        auto frozen = genotypes(solver->population());
        GenerationReport after = solver->next_generation();
        REQUIRE(after.converged);
        REQUIRE(after.stop_requested);
        REQUIRE(genotypes(solver->population()) == frozen);
    }
}

TEST_CASE("SGA average fitness rarely decreases on OneMax") {
    // s = 4, pc = 0.5, uniform crossover on l = 30; selection pressure makes
    // decreases rare but not impossible.
    ProblemInstance onemax(ProblemId::OneMax, 30);
    int steps = 0, decreases = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        EvalCounter counter;
        SgaSolver solver(200, onemax, EngineConfig{}, RngStream(seed), counter);
        double previous = solver.population().average_fitness();
        for (int g = 0; g < 40; ++g) {
            GenerationReport report = solver.next_generation();
            ++steps;
            if (report.new_average_fitness < previous)
                ++decreases;
            previous = report.new_average_fitness;
            if (report.converged)
                break;
        }
    }
    REQUIRE(steps > 0);
    REQUIRE(double(decreases) / double(steps) <= 0.05);
}

TEST_CASE("univariate sampling: absorbing and fixed positions") {
    RngStream rng(11);

    SECTION("all-ones selected set fixes every allele") {
        SelectedSet sel = set_of({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
        auto p = marginal_frequencies(sel);
        REQUIRE(p == std::vector<double>{1.0, 1.0, 1.0});
        for (int i = 0; i < 50; ++i) {
            Individual off = sample_univariate(p, rng);
            REQUIRE(off.bits()[0] == 1);
            REQUIRE(off.bits()[1] == 1);
            REQUIRE(off.bits()[2] == 1);
        }
    }

    SECTION("p_j = 0 pins allele j to zero") {
        SelectedSet sel = set_of({{1, 0, 1}, {0, 0, 1}, {1, 0, 0}});
        auto p = marginal_frequencies(sel);
        REQUIRE(p[1] == 0.0);
        for (int i = 0; i < 50; ++i)
            REQUIRE(sample_univariate(p, rng).bit(1) == 0);
    }
}

TEST_CASE("UMDA reaches the OneMax optimum reliably") {
    // l = 50, N = 500: optimum within 60 generations in at least 27/30 runs.
    ProblemInstance onemax(ProblemId::OneMax, 50);
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        EvalCounter counter;
        UmdaSolver solver(500, onemax, EngineConfig{}, RngStream(seed), counter);
        for (int g = 0; g < 60; ++g) {
            GenerationReport report = solver.next_generation();
            if (report.best.fitness() == 50.0) {
                ++successes;
                break;
            }
            if (report.converged)
                break;
        }
    }
    REQUIRE(successes >= 27);
}

TEST_CASE("engines are deterministic generation by generation") {
    ProblemInstance trap(ProblemId::TrapK, 12, 4, 0.0, RngStream(0));
    for (EngineId engine : {EngineId::Sga, EngineId::Umda, EngineId::Ecga}) {
        EvalCounter c1, c2;
        auto a = make_solver(engine, 24, trap, EngineConfig{}, RngStream(21, 1), c1);
        auto b = make_solver(engine, 24, trap, EngineConfig{}, RngStream(21, 1), c2);
        for (int g = 0; g < 6; ++g) {
            GenerationReport ra = a->next_generation();
            GenerationReport rb = b->next_generation();
            REQUIRE(ra.new_average_fitness == rb.new_average_fitness);
            REQUIRE(ra.evaluations_used == rb.evaluations_used);
            REQUIRE(genotypes(a->population()) == genotypes(b->population()));
        }
        REQUIRE(c1.total == c2.total);
    }
}

TEST_CASE("UMDA and ECGA evaluate a full generation of fresh offspring") {
    ProblemInstance onemax(ProblemId::OneMax, 10);
    for (EngineId engine : {EngineId::Umda, EngineId::Ecga}) {
        EvalCounter counter;
        auto solver = make_solver(engine, 30, onemax, EngineConfig{}, RngStream(31), counter);
        GenerationReport report = solver->next_generation();
        REQUIRE(report.evaluations_used == 30);
    }
}

TEST_CASE("ECGA learns the trap blocks") {
    // Concatenated trap-4, l = 32, N = 4000: after generation 3 the learned
    // model's groups equal the 8 trap blocks in at least 70% of generations.
    ProblemInstance trap(ProblemId::TrapK, 32, 4, 0.0, RngStream(0));
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t b = 0; b < 32; b += 4)
        blocks.push_back({b, b + 1, b + 2, b + 3});
    std::sort(blocks.begin(), blocks.end());

    int observed = 0, matches = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EvalCounter counter;
        EcgaSolver solver(4000, trap, EngineConfig{}, RngStream(seed), counter);
        for (int g = 1; g <= 12; ++g) {
            GenerationReport report = solver.next_generation();
            if (g > 3) {
                ++observed;
                std::vector<std::vector<std::size_t>> groups;
                for (const auto& group : solver.model()->groups())
                    groups.push_back(group.indices);
                std::sort(groups.begin(), groups.end());
                if (groups == blocks)
                    ++matches;
            }
            if (report.converged)
                break;
        }
    }
    REQUIRE(observed > 0);
    REQUIRE(double(matches) / double(observed) >= 0.70);
}
