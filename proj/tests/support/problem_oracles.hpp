#pragma once

// Brute-force oracles for the benchmark problems, written independently of
// the library implementation: explicit block tables and block loops, and a
// hierarchical-trap evaluator that reads child symbols straight off the leaf
// ranges instead of propagating them upward.

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "pea/problems.hpp"

namespace pea_test {

inline double oracle_dec3(unsigned u) {
    const double table[4] = {0.9, 0.8, 0.0, 1.0};
    return table[u];
}

inline double oracle_trap(unsigned u, unsigned k) {
    return u == k ? 1.0 : 0.9 * double(k - 1 - u) / double(k - 1);
}

inline unsigned ones(const std::vector<std::uint8_t>& bits, std::size_t from, std::size_t len) {
    unsigned u = 0;
    for (std::size_t i = 0; i < len; ++i)
        u += bits[from + i];
    return u;
}

// Noiseless fitness of the ONE-problem family, straight from the block
// definitions. ZERO problems are handled by complementing the input first.
inline double oracle_one_fitness(pea::ProblemId id, std::vector<std::uint8_t> bits,
                                 std::size_t trap_k) {
    using pea::ProblemId;
    if (pea::is_zero_problem(id)) {
        for (auto& b : bits)
            b ^= 1;
        id = static_cast<ProblemId>(static_cast<int>(id) + 10);
    }
    const std::size_t l = bits.size();
    double f = 0.0;
    switch (id) {
    case ProblemId::OneMax:
        return ones(bits, 0, l);
    case ProblemId::Quadratic:
        for (std::size_t b = 0; b < l; b += 2) {
            unsigned u = ones(bits, b, 2);
            f += u == 2 ? 1.0 : u == 0 ? 0.9 : 0.0;
        }
        return f;
    case ProblemId::Deceptive3:
        for (std::size_t b = 0; b < l; b += 3)
            f += oracle_dec3(ones(bits, b, 3));
        return f;
    case ProblemId::Deceptive3Bipolar:
        for (std::size_t b = 0; b < l; b += 6)
            f += oracle_dec3(static_cast<unsigned>(std::abs(3 - int(ones(bits, b, 6)))));
        return f;
    case ProblemId::Deceptive3Overlapping:
        for (std::size_t b = 0; b + 2 < l; b += 2)
            f += oracle_dec3(ones(bits, b, 3));
        return f;
    case ProblemId::TrapK:
        for (std::size_t b = 0; b < l; b += trap_k)
            f += oracle_trap(ones(bits, b, trap_k), static_cast<unsigned>(trap_k));
        return f;
    case ProblemId::Uniform6Blocks:
        for (std::size_t b = 0; b < l; b += 6)
            f += ones(bits, b, 6) == 6 ? 1.0 : 0.0;
        return f;
    default:
        throw std::logic_error("oracle_one_fitness: not a block problem");
    }
}

inline double oracle_hierarchical(const std::vector<std::uint8_t>& bits, bool variant_two) {
    std::size_t levels = 0;
    for (std::size_t p = bits.size(); p > 1; p /= 3)
        ++levels;

    auto subtree_symbol = [&](std::size_t start, std::size_t len) -> int {
        unsigned u = ones(bits, start, len);
        if (u == 0)
            return 0;
        if (u == len)
            return 1;
        return -1;
    };

    double total = 0.0;
    std::size_t subtree = 1;
    double scale = 1.0;
    for (std::size_t level = 1; level <= levels; ++level) {
        scale *= 3.0;
        const bool root = level == levels;
        const double flow = root ? 0.9 : (variant_two ? 1.0 + 0.1 / double(levels) : 1.0);
        const std::size_t group_span = 3 * subtree;
        for (std::size_t g = 0; g + group_span <= bits.size(); g += group_span) {
            int a = subtree_symbol(g, subtree);
            int b = subtree_symbol(g + subtree, subtree);
            int c = subtree_symbol(g + 2 * subtree, subtree);
            if (a < 0 || b < 0 || c < 0)
                continue;
            unsigned u = static_cast<unsigned>(a + b + c);
            total += scale * (u == 3 ? 1.0 : flow * double(2 - u) / 2.0);
        }
        subtree = group_span;
    }
    return total;
}

inline std::vector<std::uint8_t> bits_from(std::uint64_t value, std::size_t l) {
    std::vector<std::uint8_t> bits(l);
    for (std::size_t j = 0; j < l; ++j)
        bits[j] = (value >> j) & 1;
    return bits;
}

struct MenuCase {
    pea::ProblemId id;
    std::size_t l;
    std::size_t trap_k;
};

// One exhaustive-enumeration size per menu id, honoring block structure.
inline const std::vector<MenuCase>& menu_cases() {
    using pea::ProblemId;
    static const std::vector<MenuCase> cases = {
        {ProblemId::ZeroMax, 10, 0},
        {ProblemId::ZeroQuadratic, 10, 0},
        {ProblemId::Zero3Deceptive, 12, 0},
        {ProblemId::Zero3DeceptiveBipolar, 12, 0},
        {ProblemId::Zero3DeceptiveOverlapping, 11, 0},
        {ProblemId::ZeroTrapK, 12, 4},
        {ProblemId::ZeroUniform6Blocks, 12, 0},
        {ProblemId::OneMax, 10, 0},
        {ProblemId::Quadratic, 10, 0},
        {ProblemId::Deceptive3, 12, 0},
        {ProblemId::Deceptive3Bipolar, 12, 0},
        {ProblemId::Deceptive3Overlapping, 11, 0},
        {ProblemId::TrapK, 12, 4},
        {ProblemId::Uniform6Blocks, 12, 0},
        {ProblemId::HierarchicalTrapOne, 9, 0},
        {ProblemId::HierarchicalTrapTwo, 9, 0},
    };
    return cases;
}

inline double oracle_fitness(pea::ProblemId id, const std::vector<std::uint8_t>& bits,
                             std::size_t trap_k) {
    if (id == pea::ProblemId::HierarchicalTrapOne)
        return oracle_hierarchical(bits, false);
    if (id == pea::ProblemId::HierarchicalTrapTwo)
        return oracle_hierarchical(bits, true);
    return oracle_one_fitness(id, bits, trap_k);
}

} // namespace pea_test
