#pragma once

/// @file problems.hpp
/// The benchmark problem menu as pure fitness functions behind a single
/// problem interface, plus the additive Gaussian-noise wrapper.
///
/// Menu ids (ZERO problems mirror the ONE problems, with the all-zeros
/// string as their optimum):
///
///    0 ZeroMax                    10 OneMax
///    1 ZeroQuadratic              11 Quadratic
///    2 Zero3Deceptive             12 Deceptive3
///    3 Zero3DeceptiveBipolar      13 Deceptive3Bipolar
///    4 Zero3DeceptiveOverlapping  14 Deceptive3Overlapping
///    5 ZeroTrapK                  15 TrapK
///    6 ZeroUniform6Blocks         16 Uniform6Blocks
///                                 21 HierarchicalTrapOne
///                                 22 HierarchicalTrapTwo

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pea/core.hpp"

namespace pea {

enum class ProblemId : int {
    ZeroMax = 0,
    ZeroQuadratic = 1,
    Zero3Deceptive = 2,
    Zero3DeceptiveBipolar = 3,
    Zero3DeceptiveOverlapping = 4,
    ZeroTrapK = 5,
    ZeroUniform6Blocks = 6,
    OneMax = 10,
    Quadratic = 11,
    Deceptive3 = 12,
    Deceptive3Bipolar = 13,
    Deceptive3Overlapping = 14,
    TrapK = 15,
    Uniform6Blocks = 16,
    HierarchicalTrapOne = 21,
    HierarchicalTrapTwo = 22,
};

/// All menu ids, in menu order.
inline constexpr std::array<ProblemId, 16> kProblemMenu = {
    ProblemId::ZeroMax,
    ProblemId::ZeroQuadratic,
    ProblemId::Zero3Deceptive,
    ProblemId::Zero3DeceptiveBipolar,
    ProblemId::Zero3DeceptiveOverlapping,
    ProblemId::ZeroTrapK,
    ProblemId::ZeroUniform6Blocks,
    ProblemId::OneMax,
    ProblemId::Quadratic,
    ProblemId::Deceptive3,
    ProblemId::Deceptive3Bipolar,
    ProblemId::Deceptive3Overlapping,
    ProblemId::TrapK,
    ProblemId::Uniform6Blocks,
    ProblemId::HierarchicalTrapOne,
    ProblemId::HierarchicalTrapTwo,
};

inline std::optional<ProblemId> problem_from_menu(int id) {
    for (ProblemId p : kProblemMenu)
        if (static_cast<int>(p) == id)
            return p;
    return std::nullopt;
}

inline std::string_view problem_name(ProblemId id) {
    switch (id) {
    case ProblemId::ZeroMax: return "ZeroMax";
    case ProblemId::ZeroQuadratic: return "ZeroQuadratic";
    case ProblemId::Zero3Deceptive: return "Zero3Deceptive";
    case ProblemId::Zero3DeceptiveBipolar: return "Zero3DeceptiveBipolar";
    case ProblemId::Zero3DeceptiveOverlapping: return "Zero3DeceptiveOverlapping";
    case ProblemId::ZeroTrapK: return "ZeroTrapK";
    case ProblemId::ZeroUniform6Blocks: return "ZeroUniform6Blocks";
    case ProblemId::OneMax: return "OneMax";
    case ProblemId::Quadratic: return "Quadratic";
    case ProblemId::Deceptive3: return "Deceptive3";
    case ProblemId::Deceptive3Bipolar: return "Deceptive3Bipolar";
    case ProblemId::Deceptive3Overlapping: return "Deceptive3Overlapping";
    case ProblemId::TrapK: return "TrapK";
    case ProblemId::Uniform6Blocks: return "Uniform6Blocks";
    case ProblemId::HierarchicalTrapOne: return "HierarchicalTrapOne";
    case ProblemId::HierarchicalTrapTwo: return "HierarchicalTrapTwo";
    }
    return "Unknown";
}

/// ZERO problems apply the ONE-problem block functions to complemented bits.
inline bool is_zero_problem(ProblemId id) {
    return static_cast<int>(id) < 10;
}

/// Extension interface for user-defined problems. Engines and the race only
/// ever talk to this surface: a string size, a (possibly noisy) fitness
/// evaluation, and an optional known optimum for target-based stopping.
class Problem {
  public:
    virtual ~Problem() = default;

    virtual std::size_t string_size() const noexcept = 0;

    /// Fitness of a bit vector; for noisy problems each call draws fresh
    /// noise, so the caller is expected to cache per individual.
    virtual double evaluate(std::span<const std::uint8_t> bits) = 0;

    /// Known noiseless global optimum, when the problem has one.
    virtual std::optional<double> optimum() const { return std::nullopt; }
};

namespace detail {

/// Deceptive 3-bit block by unitation: misleading gradient toward u=0 with
/// the true optimum at u=3.
inline double deceptive3_value(unsigned u) {
    constexpr std::array<double, 4> table = {0.9, 0.8, 0.0, 1.0};
    return table[u];
}

/// General trap of order k: fhigh at u=k, otherwise a slope from flow at u=0
/// down to 0 at u=k-1.
inline double trap_value(unsigned u, unsigned k, double fhigh, double flow) {
    if (u == k)
        return fhigh;
    return flow * static_cast<double>(k - 1 - u) / static_cast<double>(k - 1);
}

} // namespace detail

/// A concrete instance of one menu problem: id, string size, trap order for
/// the Trap-k variants, and an additive Gaussian noise level. The noiseless
/// function is pure; noise is drawn from the instance's own stream.
class ProblemInstance final : public Problem {
  public:
    ProblemInstance(ProblemId id, std::size_t string_size, std::size_t trap_k, double sigma,
                    RngStream noise_rng)
        : id_(id), string_size_(string_size), trap_k_(trap_k), sigma_(sigma),
          noise_rng_(noise_rng) {
        if (string_size_ == 0)
            throw ConfigError("ProblemInstance: stringSize must be >= 1");
        if (sigma_ < 0.0)
            throw ConfigError("ProblemInstance: sigmaK must be >= 0");
        validate_divisibility();
        optimum_ = compute_optimum();
    }

    /// Noiseless variant, trap order defaulted for the non-trap problems.
    ProblemInstance(ProblemId id, std::size_t string_size)
        : ProblemInstance(id, string_size, 0, 0.0, RngStream(0)) {}

    ProblemId id() const noexcept { return id_; }
    std::size_t string_size() const noexcept override { return string_size_; }
    std::size_t trap_k() const noexcept { return trap_k_; }
    double sigma() const noexcept { return sigma_; }

    std::optional<double> optimum() const override { return optimum_; }

    /// Known global optimum of the noiseless function.
    double optimum_fitness() const noexcept { return optimum_; }

    /// Sample a fitness value: noiseless value plus one Gaussian noise draw.
    double evaluate(std::span<const std::uint8_t> bits) override {
        return apply_noise(noiseless_fitness(bits));
    }

    /// noiseless + N(0, sigmaK). With sigmaK = 0 this is the exact identity
    /// and consumes no randomness.
    double apply_noise(double noiseless) {
        if (sigma_ == 0.0)
            return noiseless;
        return noiseless + noise_rng_.next_gaussian(sigma_);
    }

    /// The pure fitness function per the menu definitions.
    double noiseless_fitness(std::span<const std::uint8_t> bits) const {
        if (bits.size() != string_size_)
            throw InvariantError("ProblemInstance: bit string length " +
                                 std::to_string(bits.size()) + " does not match stringSize " +
                                 std::to_string(string_size_));
        // ZERO problems evaluate the ONE-problem function on complemented bits.
        const std::uint8_t flip = is_zero_problem(id_) ? 1 : 0;
        auto bit = [&](std::size_t i) -> unsigned { return bits[i] ^ flip; };

        switch (id_) {
        case ProblemId::ZeroMax:
        case ProblemId::OneMax: {
            double sum = 0.0;
            for (std::size_t i = 0; i < bits.size(); ++i)
                sum += bit(i);
            return sum;
        }
        case ProblemId::ZeroQuadratic:
        case ProblemId::Quadratic: {
            // 2-bit blocks: "11" -> 1.0, "00" -> 0.9, mixed -> 0.
            double sum = 0.0;
            for (std::size_t b = 0; b + 1 < bits.size(); b += 2) {
                unsigned u = bit(b) + bit(b + 1);
                sum += (u == 2) ? 1.0 : (u == 0) ? 0.9 : 0.0;
            }
            return sum;
        }
        case ProblemId::Zero3Deceptive:
        case ProblemId::Deceptive3: {
            double sum = 0.0;
            for (std::size_t b = 0; b + 2 < bits.size(); b += 3)
                sum += detail::deceptive3_value(bit(b) + bit(b + 1) + bit(b + 2));
            return sum;
        }
        case ProblemId::Zero3DeceptiveBipolar:
        case ProblemId::Deceptive3Bipolar: {
            // 6-bit blocks scored by the deceptive-3 table on |3 - u|, so
            // both all-zeros and all-ones block patterns are optimal.
            double sum = 0.0;
            for (std::size_t b = 0; b + 5 < bits.size(); b += 6) {
                int u = 0;
                for (std::size_t i = 0; i < 6; ++i)
                    u += static_cast<int>(bit(b + i));
                sum += detail::deceptive3_value(static_cast<unsigned>(std::abs(3 - u)));
            }
            return sum;
        }
        case ProblemId::Zero3DeceptiveOverlapping:
        case ProblemId::Deceptive3Overlapping: {
            // 3-bit blocks overlapping by one bit: block j covers 2j..2j+2.
            double sum = 0.0;
            for (std::size_t b = 0; b + 2 < bits.size(); b += 2)
                sum += detail::deceptive3_value(bit(b) + bit(b + 1) + bit(b + 2));
            return sum;
        }
        case ProblemId::ZeroTrapK:
        case ProblemId::TrapK: {
            double sum = 0.0;
            for (std::size_t b = 0; b + trap_k_ - 1 < bits.size(); b += trap_k_) {
                unsigned u = 0;
                for (std::size_t i = 0; i < trap_k_; ++i)
                    u += bit(b + i);
                sum += detail::trap_value(u, static_cast<unsigned>(trap_k_), 1.0, 0.9);
            }
            return sum;
        }
        case ProblemId::ZeroUniform6Blocks:
        case ProblemId::Uniform6Blocks: {
            // Needle per 6-bit block: 1.0 only for the all-ones block.
            double sum = 0.0;
            for (std::size_t b = 0; b + 5 < bits.size(); b += 6) {
                unsigned u = 0;
                for (std::size_t i = 0; i < 6; ++i)
                    u += bit(b + i);
                sum += (u == 6) ? 1.0 : 0.0;
            }
            return sum;
        }
        case ProblemId::HierarchicalTrapOne:
            return hierarchical_trap(bits, false);
        case ProblemId::HierarchicalTrapTwo:
            return hierarchical_trap(bits, true);
        }
        throw InvariantError("ProblemInstance: unhandled problem id");
    }

  private:
    void validate_divisibility() {
        const std::size_t l = string_size_;
        auto require = [&](bool ok, const std::string& what) {
            if (!ok)
                throw ConfigError("ProblemInstance: stringSize " + std::to_string(l) +
                                  " invalid for " + std::string(problem_name(id_)) + ": " + what);
        };
        switch (id_) {
        case ProblemId::ZeroMax:
        case ProblemId::OneMax:
            break;
        case ProblemId::ZeroQuadratic:
        case ProblemId::Quadratic:
            require(l % 2 == 0, "must be divisible by 2");
            break;
        case ProblemId::Zero3Deceptive:
        case ProblemId::Deceptive3:
            require(l % 3 == 0, "must be divisible by 3");
            break;
        case ProblemId::Zero3DeceptiveBipolar:
        case ProblemId::Deceptive3Bipolar:
        case ProblemId::ZeroUniform6Blocks:
        case ProblemId::Uniform6Blocks:
            require(l % 6 == 0, "must be divisible by 6");
            break;
        case ProblemId::Zero3DeceptiveOverlapping:
        case ProblemId::Deceptive3Overlapping:
            require(l >= 3 && l % 2 == 1, "must be odd and >= 3");
            break;
        case ProblemId::ZeroTrapK:
        case ProblemId::TrapK:
            require(trap_k_ >= 2, "trapK must be >= 2");
            require(l % trap_k_ == 0, "must be divisible by trapK");
            break;
        case ProblemId::HierarchicalTrapOne:
        case ProblemId::HierarchicalTrapTwo: {
            std::size_t p = l;
            while (p % 3 == 0)
                p /= 3;
            require(p == 1 && l >= 3, "must be a power of 3 (>= 3)");
            break;
        }
        }
    }

    double compute_optimum() const {
        const double l = static_cast<double>(string_size_);
        switch (id_) {
        case ProblemId::ZeroMax:
        case ProblemId::OneMax:
            return l;
        case ProblemId::ZeroQuadratic:
        case ProblemId::Quadratic:
            return l / 2.0;
        case ProblemId::Zero3Deceptive:
        case ProblemId::Deceptive3:
            return l / 3.0;
        case ProblemId::Zero3DeceptiveBipolar:
        case ProblemId::Deceptive3Bipolar:
        case ProblemId::ZeroUniform6Blocks:
        case ProblemId::Uniform6Blocks:
            return l / 6.0;
        case ProblemId::Zero3DeceptiveOverlapping:
        case ProblemId::Deceptive3Overlapping:
            return (l - 1.0) / 2.0;
        case ProblemId::ZeroTrapK:
        case ProblemId::TrapK:
            return l / static_cast<double>(trap_k_);
        case ProblemId::HierarchicalTrapOne:
        case ProblemId::HierarchicalTrapTwo: {
            // All-ones scores fhigh = 1 at every node of every level; each
            // level's scaled total is 3^h, giving h * 3^h overall.
            std::size_t levels = 0;
            for (std::size_t p = string_size_; p > 1; p /= 3)
                ++levels;
            return static_cast<double>(levels) * static_cast<double>(string_size_);
        }
        }
        throw InvariantError("ProblemInstance: unhandled problem id");
    }

    /// Hierarchical traps over a balanced ternary tree. Triples of symbols
    /// map to a parent symbol (000 -> 0, 111 -> 1, mixed -> null); each
    /// non-null triple contributes a trap-3 value scaled by 3^level so every
    /// level carries equal total weight; triples containing null contribute
    /// nothing. Variant one is deceptive only at the root (non-root levels
    /// use fhigh = flow = 1, the root uses flow = 0.9); variant two also
    /// biases every non-root level toward zeros with flow = 1 + 0.1/h.
    /// The global optimum of both variants is the all-ones string.
    double hierarchical_trap(std::span<const std::uint8_t> bits, bool variant_two) const {
        std::size_t levels = 0;
        for (std::size_t p = string_size_; p > 1; p /= 3)
            ++levels;

        constexpr std::int8_t kNull = -1;
        std::vector<std::int8_t> symbols(bits.begin(), bits.end());
        double total = 0.0;
        double scale = 1.0;
        for (std::size_t level = 1; level <= levels; ++level) {
            scale *= 3.0;
            const bool root = (level == levels);
            const double fhigh = 1.0;
            const double flow = root ? 0.9
                                     : (variant_two ? 1.0 + 0.1 / static_cast<double>(levels)
                                                    : 1.0);
            std::vector<std::int8_t> parents(symbols.size() / 3);
            for (std::size_t t = 0; t < parents.size(); ++t) {
                std::int8_t a = symbols[3 * t];
                std::int8_t b = symbols[3 * t + 1];
                std::int8_t c = symbols[3 * t + 2];
                if (a == kNull || b == kNull || c == kNull) {
                    parents[t] = kNull;
                    continue;
                }
                unsigned u = static_cast<unsigned>(a + b + c);
                total += scale * detail::trap_value(u, 3, fhigh, flow);
                parents[t] = (u == 0) ? 0 : (u == 3) ? 1 : kNull;
            }
            symbols = std::move(parents);
        }
        return total;
    }

    ProblemId id_;
    std::size_t string_size_;
    std::size_t trap_k_;
    double sigma_;
    double optimum_ = 0.0;
    RngStream noise_rng_;
};

} // namespace pea
