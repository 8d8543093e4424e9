#pragma once

/// @file race.hpp
/// The parameter-less coordinator: a race among an unbounded ladder of
/// populations with exponentially increasing size, interleaved so that each
/// population runs four generations for every one generation of the next
/// larger population.
///
/// Slot i holds a population of size 2^i * N0. Two elimination rules keep the
/// ladder small: once a larger population's average fitness is at least as
/// good as its nearest smaller active neighbour's, every smaller population
/// is dropped (it has been caught up); and once a population has genotypically
/// converged it can never improve, so its best is recorded and it is dropped
/// together with everything smaller. The race itself never terminates; stop
/// criteria are evaluated by the caller between steps.

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "pea/core.hpp"
#include "pea/engines.hpp"

namespace pea {

/// Population size of ladder slot `index`: 2^index * n0.
inline std::uint64_t population_size(std::size_t index, std::uint64_t n0) {
    if (n0 == 0)
        throw ConfigError("population_size: N0 must be >= 1");
    if (index >= 64 || n0 > (std::numeric_limits<std::uint64_t>::max() >> index))
        throw ResourceError("population_size: 2^" + std::to_string(index) + " * " +
                            std::to_string(n0) + " exceeds the platform integer range");
    return n0 << index;
}

/// User-facing stop criteria; the race runs forever when none is set.
struct StopCriteria {
    std::optional<std::uint64_t> max_evaluations;
    std::optional<double> target_fitness;
    double target_tolerance = 1e-9;
    std::optional<std::size_t> max_ladder_index;
    std::optional<std::chrono::duration<double>> max_wall_clock;
    std::optional<std::uint64_t> max_steps_of_largest;

    bool any() const {
        return max_evaluations || target_fitness || max_ladder_index || max_wall_clock ||
               max_steps_of_largest;
    }

    bool operator==(const StopCriteria&) const = default;
};

enum class StopReason {
    TargetFitness,
    MaxEvaluations,
    MaxLadderIndex,
    MaxWallClock,
    MaxStepsOfLargest,
};

inline std::string_view stop_reason_name(StopReason reason) {
    switch (reason) {
    case StopReason::TargetFitness: return "targetFitness";
    case StopReason::MaxEvaluations: return "maxEvaluations";
    case StopReason::MaxLadderIndex: return "maxLadderIndex";
    case StopReason::MaxWallClock: return "maxWallClock";
    case StopReason::MaxStepsOfLargest: return "maxStepsOfLargest";
    }
    return "unknown";
}

enum class EliminationKind { None, Converged, CatchUp };

/// One rung of the ladder.
struct SolverSlot {
    std::size_t index = 0;
    std::uint64_t size = 0; // always 2^index * N0
    std::unique_ptr<Solver> solver;
    std::uint64_t generations = 0;
    double last_average_fitness = 0.0;
    bool active = true;
    bool creation_reported = false;
};

/// Best solution observed so far across every population of the race.
struct BestRecord {
    Individual individual;
    double fitness = 0.0;
    std::uint64_t evaluations_at_discovery = 0;
};

/// Record of one race step (one generation of one slot).
struct StepEvent {
    std::uint64_t step = 0;
    std::size_t slot_index = 0;
    std::uint64_t population_size = 0;
    std::uint64_t generation = 0; // the slot's generation count after this step
    std::uint64_t evaluations_used = 0;
    double average_fitness = 0.0;
    double best_fitness = 0.0; // best-so-far after this step
    std::uint64_t total_evaluations = 0;
    std::optional<std::size_t> created_slot;
    std::vector<std::size_t> eliminated; // ascending slot indices
    EliminationKind elimination_kind = EliminationKind::None;
};

/// Builds the engine solver for a slot. The factory receives the slot's
/// population size and ladder index (the index doubles as a stream id so
/// every slot draws from its own random stream).
using SolverFactory = std::function<std::unique_ptr<Solver>(std::uint64_t pop_size,
                                                            std::size_t slot_index)>;

struct RaceOptions {
    std::uint64_t initial_population_size = 10; // N0
    std::uint64_t generation_ratio = 4;
    bool elimination_enabled = true; // test hook; disable to observe the pure schedule
};

class Race {
  public:
    using Options = RaceOptions;

    Race(SolverFactory factory, EvalCounter& counter, Options options = Options{})
        : factory_(std::move(factory)), counter_(counter), options_(options),
          started_at_(std::chrono::steady_clock::now()) {
        if (options_.initial_population_size == 0)
            throw ConfigError("Race: N0 must be >= 1");
        if (options_.generation_ratio == 0)
            throw ConfigError("Race: generation ratio must be >= 1");
    }

    /// Creates slot 0 if the ladder is empty. Stop criteria that depend on
    /// evaluation counts can then fire before any generation runs.
    void start() {
        if (slots_.empty())
            create_slot(0);
    }

    /// Slot index the next step will run.
    std::size_t scheduled_slot() const noexcept { return pointer_; }

    /// Runs one generation of the scheduled slot, then applies convergence
    /// elimination followed by catch-up elimination and advances the
    /// schedule pointer.
    StepEvent run_one_step() {
        start();

        const std::size_t idx = pointer_;
        if (idx == slots_.size())
            create_slot(idx);

        SolverSlot& slot = slots_[idx];
        StepEvent event;
        event.step = ++steps_executed_;
        event.slot_index = idx;
        event.population_size = slot.size;
        if (!slot.creation_reported) {
            event.created_slot = idx;
            slot.creation_reported = true;
        }

        GenerationReport report = slot.solver->next_generation();
        slot.generations += 1;
        slot.last_average_fitness = report.new_average_fitness;
        update_best(report.best);

        event.generation = slot.generations;
        event.evaluations_used = report.evaluations_used;
        event.average_fitness = slot.last_average_fitness;

        if (options_.elimination_enabled) {
            if (report.converged) {
                event.eliminated = eliminate_up_to(idx);
                event.elimination_kind = EliminationKind::Converged;
            } else {
                event.eliminated = catch_up_eliminate(idx);
                if (!event.eliminated.empty())
                    event.elimination_kind = EliminationKind::CatchUp;
            }
        }

        if (event.elimination_kind != EliminationKind::None)
            pointer_ = smallest_active_or_next();
        else if (slot.generations % options_.generation_ratio == 0)
            pointer_ = idx + 1; // created lazily when the next step visits it
        else
            pointer_ = smallest_active_or_next();

        event.best_fitness = best_ ? best_->fitness : 0.0;
        event.total_evaluations = counter_.total;
        return event;
    }

    /// First satisfied criterion in fixed order, or nothing.
    std::optional<StopReason> should_stop(const StopCriteria& criteria) const {
        if (criteria.target_fitness && best_ &&
            best_->fitness >= *criteria.target_fitness - criteria.target_tolerance)
            return StopReason::TargetFitness;
        if (criteria.max_evaluations && counter_.total >= *criteria.max_evaluations)
            return StopReason::MaxEvaluations;
        if (criteria.max_ladder_index && !slots_.empty() &&
            slots_.back().index >= *criteria.max_ladder_index)
            return StopReason::MaxLadderIndex;
        if (criteria.max_wall_clock &&
            std::chrono::steady_clock::now() - started_at_ >= *criteria.max_wall_clock)
            return StopReason::MaxWallClock;
        if (criteria.max_steps_of_largest && !slots_.empty() &&
            slots_.back().generations >= *criteria.max_steps_of_largest)
            return StopReason::MaxStepsOfLargest;
        return std::nullopt;
    }

    const std::vector<SolverSlot>& slots() const noexcept { return slots_; }
    const std::optional<BestRecord>& best_so_far() const noexcept { return best_; }
    std::uint64_t steps_executed() const noexcept { return steps_executed_; }
    std::uint64_t total_evaluations() const noexcept { return counter_.total; }
    std::uint64_t initial_population_size() const noexcept {
        return options_.initial_population_size;
    }

  private:
    void create_slot(std::size_t index) {
        SolverSlot slot;
        slot.index = index;
        slot.size = population_size(index, options_.initial_population_size);
        slot.solver = factory_(slot.size, index);
        slot.last_average_fitness = slot.solver->population().average_fitness();
        update_best(slot.solver->population().best());
        slots_.push_back(std::move(slot));
    }

    void update_best(const Individual& candidate) {
        if (!candidate.evaluated())
            return;
        if (!best_ || candidate.fitness() > best_->fitness)
            best_ = BestRecord{candidate, candidate.fitness(), counter_.total};
    }

    /// Deactivates every active slot with index < i. Returns the indices.
    std::vector<std::size_t> eliminate_below(std::size_t i) {
        std::vector<std::size_t> gone;
        for (auto& slot : slots_) {
            if (slot.index >= i)
                break;
            if (slot.active) {
                slot.active = false;
                gone.push_back(slot.index);
            }
        }
        return gone;
    }

    /// Convergence elimination: the converged slot and everything smaller.
    std::vector<std::size_t> eliminate_up_to(std::size_t i) {
        std::vector<std::size_t> gone = eliminate_below(i);
        if (slots_[i].active) {
            slots_[i].active = false;
            gone.push_back(i);
        }
        return gone;
    }

    /// Catch-up rule: compare slot i against the nearest smaller active slot;
    /// "at least as good" (>=) eliminates all smaller slots.
    std::vector<std::size_t> catch_up_eliminate(std::size_t i) {
        std::optional<std::size_t> neighbour;
        for (const auto& slot : slots_) {
            if (slot.index >= i)
                break;
            if (slot.active)
                neighbour = slot.index;
        }
        if (!neighbour)
            return {};
        if (slots_[i].last_average_fitness >= slots_[*neighbour].last_average_fitness)
            return eliminate_below(i);
        return {};
    }

    /// Smallest active index; when every slot is eliminated the race moves on
    /// to the next, bigger ladder index rather than restarting smaller.
    std::size_t smallest_active_or_next() const {
        for (const auto& slot : slots_)
            if (slot.active)
                return slot.index;
        return slots_.size();
    }

    SolverFactory factory_;
    EvalCounter& counter_;
    Options options_;
    std::vector<SolverSlot> slots_;
    std::size_t pointer_ = 0;
    std::optional<BestRecord> best_;
    std::uint64_t steps_executed_ = 0;
    std::chrono::steady_clock::time_point started_at_;
};

} // namespace pea
