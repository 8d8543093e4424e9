#pragma once

/// @file core.hpp
/// Fixed-length bitstring individuals, constant-size populations, seeded
/// randomness and fitness-evaluation accounting shared by every engine.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pea {

/// Bad user-supplied settings (sizes, ids, parameter files).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A library invariant was violated (length mismatch, unevaluated read, ...).
class InvariantError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A computation exceeded the platform's integer or resource limits.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File read/write failure in the harness.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Seeded random stream with platform-independent output.
///
/// The engine is std::mt19937_64, whose raw output sequence is pinned by the
/// C++ standard. All derived draws (uniform ints, uniform reals, Gaussians,
/// shuffles) are implemented here rather than with <random> distributions,
/// because the standard does not pin those and libstdc++/libc++/MSVC all
/// disagree. Identical (seed, stream) therefore yields identical draws on
/// every platform.
///
/// Independent sub-streams are derived from a (seed, stream) pair with a
/// splitmix64 mix, so one 64-bit experiment seed can fan out to per-slot and
/// per-noise streams without overlap in practice.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(mix(seed, stream)) {}

    /// Raw 64 uniform random bits.
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Single fair bit.
    std::uint8_t next_bit() { return static_cast<std::uint8_t>(next_u64() >> 63); }

    /// Uniform integer in [0, bound). Rejection sampling over a power-of-two
    /// mask keeps the result exactly uniform and platform-independent.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0)
            throw InvariantError("RngStream::next_below: bound must be positive");
        if (bound == 1)
            return 0;
        std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
        std::uint64_t r;
        do {
            r = next_u64() & mask;
        } while (r >= bound);
        return r;
    }

    /// Gaussian draw, mean 0, standard deviation sigma (Box-Muller, the spare
    /// value is cached so consecutive draws cost one pair of uniforms).
    double next_gaussian(double sigma) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_ * sigma;
        }
        // u1 in (0, 1] so the log is finite.
        double u1 = 1.0 - next_double();
        double u2 = next_double();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * pi_ * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle) * sigma;
    }

    /// Fisher-Yates shuffle (std::shuffle is not portable across libraries).
    template <class T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

  private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 finalizer over seed advanced by the stream id.
        std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static constexpr double pi_ = 3.141592653589793238462643383279502884;

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Counts fitness-function evaluations. Monotone; incremented exactly once
/// per individual actually evaluated (cache hits do not count).
struct EvalCounter {
    std::uint64_t total = 0;

    void increment() { ++total; }
};

/// One candidate solution: a fixed-length string of zeros and ones plus a
/// cached fitness. The fitness cache belongs to the object, not the genotype;
/// copying an evaluated individual copies its cache, building new bits yields
/// a cold cache.
class Individual {
  public:
    Individual() = default;

    explicit Individual(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto b : bits_)
            if (b > 1)
                throw InvariantError("Individual: alleles must be 0 or 1");
    }

    /// Fresh individual with each allele an independent fair coin flip.
    static Individual random(std::size_t string_size, RngStream& rng) {
        if (string_size == 0)
            throw ConfigError("Individual::random: stringSize must be >= 1");
        std::vector<std::uint8_t> bits(string_size);
        for (auto& b : bits)
            b = rng.next_bit();
        return Individual(std::move(bits));
    }

    std::size_t size() const noexcept { return bits_.size(); }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::uint8_t bit(std::size_t i) const { return bits_[i]; }

    bool evaluated() const noexcept { return evaluated_; }

    double fitness() const {
        if (!evaluated_)
            throw InvariantError("Individual::fitness read before evaluation");
        return fitness_;
    }

    void set_fitness(double value) noexcept {
        fitness_ = value;
        evaluated_ = true;
    }

    bool same_genotype(const Individual& other) const noexcept {
        return bits_ == other.bits_;
    }

  private:
    std::vector<std::uint8_t> bits_;
    double fitness_ = 0.0;
    bool evaluated_ = false;
};

/// Evaluates an individual against any problem exposing string_size() and
/// evaluate(bits). Cached results are returned without re-evaluating or
/// touching the counter, which keeps evaluation accounting exact.
template <class ProblemT>
double evaluate(Individual& ind, ProblemT& problem, EvalCounter& counter) {
    if (ind.evaluated())
        return ind.fitness();
    if (ind.size() != problem.string_size())
        throw InvariantError("evaluate: individual length " + std::to_string(ind.size()) +
                             " does not match problem stringSize " +
                             std::to_string(problem.string_size()));
    double f = problem.evaluate(ind.bits());
    ind.set_fitness(f);
    counter.increment();
    return f;
}

/// Constant-size collection of individuals. The size is fixed at construction
/// for the whole run; generational engines replace the members wholesale.
class Population {
  public:
    explicit Population(std::vector<Individual> members) : members_(std::move(members)) {
        if (members_.empty())
            throw ConfigError("Population: size must be positive");
    }

    /// Initial random population, unevaluated.
    static Population random(std::size_t size, std::size_t string_size, RngStream& rng) {
        std::vector<Individual> members;
        members.reserve(size);
        for (std::size_t i = 0; i < size; ++i)
            members.push_back(Individual::random(string_size, rng));
        return Population(std::move(members));
    }

    std::size_t size() const noexcept { return members_.size(); }

    const Individual& operator[](std::size_t i) const { return members_[i]; }
    Individual& operator[](std::size_t i) { return members_[i]; }

    auto begin() noexcept { return members_.begin(); }
    auto end() noexcept { return members_.end(); }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    /// Arithmetic mean of member fitness values, summed in member index
    /// order. Every member must be evaluated. A population whose members all
    /// share one fitness value averages to exactly that value.
    double average_fitness() const {
        double sum = 0.0;
        bool constant = true;
        const double first = members_[0].fitness();
        for (const auto& m : members_) {
            sum += m.fitness();
            constant = constant && m.fitness() == first;
        }
        if (constant)
            return first;
        return sum / static_cast<double>(members_.size());
    }

    /// Member with maximal fitness; ties resolve to the lowest index.
    const Individual& best() const {
        const Individual* b = &members_[0];
        for (const auto& m : members_)
            if (m.fitness() > b->fitness())
                b = &m;
        return *b;
    }

    /// Genotypic convergence: every member carries the same bit vector.
    /// Without mutation a converged population can never change again.
    bool converged() const {
        for (std::size_t i = 1; i < members_.size(); ++i)
            if (!members_[i].same_genotype(members_[0]))
                return false;
        return true;
    }

    /// Wholesale generational replacement; the new member list must have the
    /// same size, preserving the constant-population-size contract.
    void replace_members(std::vector<Individual> next) {
        if (next.size() != members_.size())
            throw InvariantError("Population::replace_members: size must stay " +
                                 std::to_string(members_.size()));
        members_ = std::move(next);
    }

  private:
    std::vector<Individual> members_;
};

/// Output of a selection operator; its size may differ from the population's.
struct SelectedSet {
    std::vector<Individual> members;

    std::size_t size() const noexcept { return members.size(); }
};

} // namespace pea
