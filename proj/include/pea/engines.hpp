#pragma once

/// @file engines.hpp
/// Pluggable generational engines behind a single solver interface: a simple
/// GA without mutation, UMDA, and ECGA. Each consumes a constant-size
/// population and produces the next generation plus an evaluation and
/// convergence report.
///
/// To add an engine (hBOA, say): derive from Solver, give it an EngineId,
/// and extend make_solver. The race and harness only see the interface.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "pea/core.hpp"
#include "pea/mpm.hpp"
#include "pea/problems.hpp"

namespace pea {

/// Engine menu. The simple GA carries id 0; hBOA is not included here.
enum class EngineId : int {
    Sga = 0,
    Umda = 1,
    Ecga = 2,
};

inline std::optional<EngineId> engine_from_menu(int id) {
    switch (id) {
    case 0: return EngineId::Sga;
    case 1: return EngineId::Umda;
    case 2: return EngineId::Ecga;
    default: return std::nullopt;
    }
}

inline std::string_view engine_name(EngineId id) {
    switch (id) {
    case EngineId::Sga: return "SGA";
    case EngineId::Umda: return "UMDA";
    case EngineId::Ecga: return "ECGA";
    }
    return "Unknown";
}

enum class CrossoverKind { Uniform, OnePoint };

/// Engine parameters with robust fixed defaults: strong tournament selection
/// (s = 4) paired with conservative crossover, half-population selected sets
/// for the distribution estimators, and ECGA groups capped at 8 variables.
struct EngineConfig {
    std::size_t tournament_size = 4;
    double crossover_probability = 0.5;
    CrossoverKind crossover_kind = CrossoverKind::Uniform;
    double selected_set_fraction = 0.5;
    std::size_t max_ecga_group_size = 8;

    void validate() const {
        if (tournament_size == 0)
            throw ConfigError("EngineConfig: tournamentSize must be >= 1");
        if (crossover_probability < 0.0 || crossover_probability > 1.0)
            throw ConfigError("EngineConfig: crossoverProbability must be in [0, 1]");
        if (selected_set_fraction <= 0.0 || selected_set_fraction > 1.0)
            throw ConfigError("EngineConfig: selectedSetFraction must be in (0, 1]");
        if (max_ecga_group_size == 0 || max_ecga_group_size > 20)
            throw ConfigError("EngineConfig: maxEcgaGroupSize must be in [1, 20]");
    }

    bool operator==(const EngineConfig&) const = default;
};

/// What one generation did. evaluations_used counts only offspring whose
/// fitness cache was cold; stop_requested is raised once the population has
/// genotypically converged, since without mutation it can never change again.
struct GenerationReport {
    std::uint64_t evaluations_used = 0;
    double new_average_fitness = 0.0;
    Individual best;
    bool converged = false;
    bool stop_requested = false;
};

/// A running engine instance owning one population.
class Solver {
  public:
    virtual ~Solver() = default;

    /// Evolve the population by exactly one generation.
    virtual GenerationReport next_generation() = 0;

    virtual const Population& population() const = 0;
};

/// Tournament selection without replacement: the population is shuffled and
/// partitioned into tournaments of `tournament_size`; each tournament's
/// max-fitness member wins, ties going to the earliest position in the
/// shuffled order. A fresh shuffle starts whenever fewer than
/// `tournament_size` unconsumed entries remain, so drawing N winners with
/// size s makes exactly s passes over the population when s divides N.
inline SelectedSet tournament_select(const Population& pop, std::size_t tournament_size,
                                     std::size_t count, RngStream& rng) {
    if (tournament_size == 0)
        throw ConfigError("tournament_select: tournament size must be >= 1");
    if (tournament_size > pop.size())
        throw ConfigError("tournament_select: tournament size exceeds population size");

    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t cursor = order.size();

    SelectedSet out;
    out.members.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        if (cursor + tournament_size > order.size()) {
            rng.shuffle(order);
            cursor = 0;
        }
        std::size_t best = order[cursor];
        for (std::size_t k = 1; k < tournament_size; ++k) {
            std::size_t cand = order[cursor + k];
            if (pop[cand].fitness() > pop[best].fitness())
                best = cand;
        }
        cursor += tournament_size;
        out.members.push_back(pop[best]);
    }
    return out;
}

/// Per-position frequencies of allele 1 in a selected set.
inline std::vector<double> marginal_frequencies(const SelectedSet& selected) {
    if (selected.size() == 0)
        throw InvariantError("marginal_frequencies: selected set must be non-empty");
    const std::size_t l = selected.members.front().size();
    std::vector<double> p_one(l, 0.0);
    for (const auto& member : selected.members)
        for (std::size_t j = 0; j < l; ++j)
            p_one[j] += member.bit(j);
    for (auto& p : p_one)
        p /= static_cast<double>(selected.size());
    return p_one;
}

/// One offspring with independent Bernoulli(p_j) alleles (UMDA sampling).
/// p_j = 0 and p_j = 1 fix the allele exactly.
inline Individual sample_univariate(const std::vector<double>& p_one, RngStream& rng) {
    std::vector<std::uint8_t> bits(p_one.size());
    for (std::size_t j = 0; j < bits.size(); ++j)
        bits[j] = rng.next_double() < p_one[j] ? 1 : 0;
    return Individual(std::move(bits));
}

/// One offspring sampled group-wise from a marginal product model: each
/// group's full configuration is drawn from its empirical distribution,
/// realized by copying the group's bits from a uniformly chosen member of
/// the selected set the model was built on.
inline Individual sample_from_model(const MarginalProductModel& model, const SelectedSet& selected,
                                    RngStream& rng) {
    std::vector<std::uint8_t> bits(model.string_size());
    for (const auto& group : model.groups()) {
        const Individual& donor =
            selected.members[static_cast<std::size_t>(rng.next_below(selected.size()))];
        for (std::size_t idx : group.indices)
            bits[idx] = donor.bit(idx);
    }
    return Individual(std::move(bits));
}

namespace detail {

/// Shared generational plumbing: the population, the problem handle, config,
/// the solver's private random stream and the run-wide evaluation counter.
class GenerationalSolver : public Solver {
  public:
    const Population& population() const override { return pop_; }

  protected:
    GenerationalSolver(std::size_t pop_size, Problem& problem, EngineConfig config,
                       RngStream rng, EvalCounter& counter)
        : problem_(problem), config_(config), rng_(rng),
          pop_(Population::random(require_size(pop_size), problem.string_size(), rng_)),
          counter_(counter) {
        config_.validate();
        for (auto& member : pop_)
            evaluate(member, problem_, counter_);
    }

    /// Evaluate offspring (cold caches only are counted), replace the
    /// population wholesale and assemble the report.
    GenerationReport finish_generation(std::vector<Individual> offspring) {
        const std::uint64_t before = counter_.total;
        for (auto& o : offspring)
            evaluate(o, problem_, counter_);
        pop_.replace_members(std::move(offspring));

        GenerationReport report;
        report.evaluations_used = counter_.total - before;
        report.new_average_fitness = pop_.average_fitness();
        report.best = pop_.best();
        report.converged = pop_.converged();
        report.stop_requested = report.converged;
        return report;
    }

    std::size_t selected_count() const {
        auto m = static_cast<std::size_t>(
            std::llround(config_.selected_set_fraction * static_cast<double>(pop_.size())));
        return std::clamp<std::size_t>(m, 1, pop_.size());
    }

    Problem& problem_;
    EngineConfig config_;
    RngStream rng_;
    Population pop_;
    EvalCounter& counter_;

  private:
    static std::size_t require_size(std::size_t pop_size) {
        if (pop_size < 2)
            throw ConfigError("Solver: population size must be >= 2");
        return pop_size;
    }
};

} // namespace detail

/// Simple genetic algorithm, deliberately without a mutation operator:
/// tournament selection, pairwise crossover with probability pc (uniform or
/// one-point), wholesale replacement. Parents copied through keep their
/// cached fitness; crossover products are new individuals.
class SgaSolver final : public detail::GenerationalSolver {
  public:
    SgaSolver(std::size_t pop_size, Problem& problem, EngineConfig config, RngStream rng,
              EvalCounter& counter)
        : GenerationalSolver(pop_size, problem, config, rng, counter) {}

    GenerationReport next_generation() override {
        const std::size_t n = pop_.size();
        SelectedSet parents = tournament_select(pop_, config_.tournament_size, n, rng_);

        std::vector<Individual> offspring;
        offspring.reserve(n);
        for (std::size_t i = 0; i + 1 < n; i += 2) {
            Individual& a = parents.members[i];
            Individual& b = parents.members[i + 1];
            if (a.size() >= 2 && rng_.next_double() < config_.crossover_probability) {
                auto [c1, c2] = cross(a, b);
                offspring.push_back(std::move(c1));
                offspring.push_back(std::move(c2));
            } else {
                offspring.push_back(a);
                offspring.push_back(b);
            }
        }
        if (offspring.size() < n)
            offspring.push_back(parents.members[n - 1]); // odd N: last parent copies through
        return finish_generation(std::move(offspring));
    }

  private:
    std::pair<Individual, Individual> cross(const Individual& a, const Individual& b) {
        const std::size_t l = a.size();
        std::vector<std::uint8_t> c1(l), c2(l);
        if (config_.crossover_kind == CrossoverKind::Uniform) {
            for (std::size_t j = 0; j < l; ++j) {
                if (rng_.next_bit()) {
                    c1[j] = a.bit(j);
                    c2[j] = b.bit(j);
                } else {
                    c1[j] = b.bit(j);
                    c2[j] = a.bit(j);
                }
            }
        } else {
            std::size_t cut = 1 + static_cast<std::size_t>(rng_.next_below(l - 1));
            for (std::size_t j = 0; j < l; ++j) {
                c1[j] = j < cut ? a.bit(j) : b.bit(j);
                c2[j] = j < cut ? b.bit(j) : a.bit(j);
            }
        }
        return {Individual(std::move(c1)), Individual(std::move(c2))};
    }
};

/// Univariate marginal distribution algorithm: per-position one-frequencies
/// of the tournament-selected set, offspring sampled with independent
/// Bernoulli draws per position.
class UmdaSolver final : public detail::GenerationalSolver {
  public:
    UmdaSolver(std::size_t pop_size, Problem& problem, EngineConfig config, RngStream rng,
               EvalCounter& counter)
        : GenerationalSolver(pop_size, problem, config, rng, counter) {}

    GenerationReport next_generation() override {
        const std::size_t n = pop_.size();
        const std::size_t m = selected_count();
        SelectedSet sel = tournament_select(pop_, config_.tournament_size, m, rng_);
        std::vector<double> p_one = marginal_frequencies(sel);

        std::vector<Individual> offspring;
        offspring.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            offspring.push_back(sample_univariate(p_one, rng_));
        return finish_generation(std::move(offspring));
    }
};

/// Extended compact GA: learns a marginal product model over the selected
/// set by greedy MDL merging, then samples each group's configuration
/// independently from its empirical distribution (realized by copying the
/// group's bits from a uniformly drawn selected member).
class EcgaSolver final : public detail::GenerationalSolver {
  public:
    EcgaSolver(std::size_t pop_size, Problem& problem, EngineConfig config, RngStream rng,
               EvalCounter& counter)
        : GenerationalSolver(pop_size, problem, config, rng, counter) {}

    GenerationReport next_generation() override {
        const std::size_t n = pop_.size();
        const std::size_t l = problem_.string_size();
        const std::size_t m = selected_count();
        SelectedSet sel = tournament_select(pop_, config_.tournament_size, m, rng_);

        model_ = build_mpm_model(sel, l, config_.max_ecga_group_size);

        std::vector<Individual> offspring;
        offspring.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            offspring.push_back(sample_from_model(*model_, sel, rng_));
        return finish_generation(std::move(offspring));
    }

    /// Model learned in the most recent generation.
    const std::optional<MarginalProductModel>& model() const noexcept { return model_; }

  private:
    std::optional<MarginalProductModel> model_;
};

/// Factory mirroring the engine menu; the solver owns a freshly evaluated
/// random population of exactly pop_size individuals, with those initial
/// evaluations booked on the shared counter.
inline std::unique_ptr<Solver> make_solver(EngineId engine, std::size_t pop_size,
                                           Problem& problem, const EngineConfig& config,
                                           RngStream rng, EvalCounter& counter) {
    switch (engine) {
    case EngineId::Sga:
        return std::make_unique<SgaSolver>(pop_size, problem, config, rng, counter);
    case EngineId::Umda:
        return std::make_unique<UmdaSolver>(pop_size, problem, config, rng, counter);
    case EngineId::Ecga:
        return std::make_unique<EcgaSolver>(pop_size, problem, config, rng, counter);
    }
    throw ConfigError("make_solver: unknown engine id");
}

} // namespace pea
