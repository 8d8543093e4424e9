#pragma once

/// @file mpm.hpp
/// ECGA's marginal product model: a partition of the variable indices into
/// groups, each modelled by the empirical joint distribution of its
/// configurations in the selected set. Model search greedily merges the pair
/// of groups that most decreases the combined complexity
///
///     CC = log2(M+1) * sum_g (2^|g| - 1)  +  M * sum_g H_g
///
/// where M is the selected-set size and H_g the empirical entropy (in bits)
/// of group g's configuration distribution. The first term prices the model,
/// the second the population compressed under it.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <limits>
#include <utility>
#include <vector>

#include "pea/core.hpp"

namespace pea {

/// One group of the partition with its observed configurations.
struct MpmGroup {
    /// Variable indices covered by this group, ascending.
    std::vector<std::size_t> indices;
    /// Observed (configuration, count) pairs, ascending by configuration.
    /// Configurations pack the group's bits with indices[k] at bit k.
    std::vector<std::pair<std::uint64_t, std::uint32_t>> config_counts;
    /// Empirical entropy of the configuration distribution, in bits.
    double entropy_bits = 0.0;
};

class MarginalProductModel {
  public:
    MarginalProductModel(std::vector<MpmGroup> groups, std::size_t string_size,
                         std::size_t selected_size)
        : groups_(std::move(groups)), string_size_(string_size), selected_size_(selected_size) {}

    const std::vector<MpmGroup>& groups() const noexcept { return groups_; }
    std::size_t string_size() const noexcept { return string_size_; }
    std::size_t selected_size() const noexcept { return selected_size_; }

    /// Normalized frequency of one configuration of group g.
    double frequency(std::size_t group, std::uint64_t config) const {
        const auto& cc = groups_[group].config_counts;
        auto it = std::lower_bound(cc.begin(), cc.end(), config,
                                   [](const auto& p, std::uint64_t c) { return p.first < c; });
        if (it == cc.end() || it->first != config)
            return 0.0;
        return static_cast<double>(it->second) / static_cast<double>(selected_size_);
    }

    /// Total combined complexity of this model on its selected set.
    double combined_complexity() const {
        double model_cost = 0.0;
        double data_cost = 0.0;
        const double log_m1 = std::log2(static_cast<double>(selected_size_) + 1.0);
        for (const auto& g : groups_) {
            model_cost += log_m1 * (std::ldexp(1.0, static_cast<int>(g.indices.size())) - 1.0);
            data_cost += static_cast<double>(selected_size_) * g.entropy_bits;
        }
        return model_cost + data_cost;
    }

  private:
    std::vector<MpmGroup> groups_;
    std::size_t string_size_;
    std::size_t selected_size_;
};

namespace detail {

/// Packs the configuration of `indices` for every selected member into `out`.
inline void pack_configs(const SelectedSet& selected, const std::vector<std::size_t>& indices,
                         std::vector<std::uint64_t>& out) {
    out.clear();
    out.reserve(selected.size());
    for (const auto& member : selected.members) {
        std::uint64_t c = 0;
        for (std::size_t k = 0; k < indices.size(); ++k)
            c |= static_cast<std::uint64_t>(member.bit(indices[k])) << k;
        out.push_back(c);
    }
}

/// Empirical entropy in bits of a multiset of configurations; sorts in place.
inline double entropy_bits(std::vector<std::uint64_t>& configs) {
    std::sort(configs.begin(), configs.end());
    const double m = static_cast<double>(configs.size());
    double sum_clog = 0.0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= configs.size(); ++i) {
        if (i < configs.size() && configs[i] == configs[i - 1]) {
            ++run;
            continue;
        }
        sum_clog += static_cast<double>(run) * std::log2(static_cast<double>(run));
        run = 1;
    }
    return std::log2(m) - sum_clog / m;
}

/// Per-group cost: model description plus compressed-population term.
inline double group_cost(std::size_t group_size, double entropy, std::size_t m) {
    const double log_m1 = std::log2(static_cast<double>(m) + 1.0);
    return log_m1 * (std::ldexp(1.0, static_cast<int>(group_size)) - 1.0) +
           static_cast<double>(m) * entropy;
}

/// Sorted counts of a sorted configuration multiset.
inline std::vector<std::pair<std::uint64_t, std::uint32_t>>
count_runs(const std::vector<std::uint64_t>& sorted) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i])
            ++j;
        out.emplace_back(sorted[i], static_cast<std::uint32_t>(j - i));
        i = j;
    }
    return out;
}

} // namespace detail

/// Greedy model search. Starts from singleton groups and repeatedly applies
/// the size-respecting merge that most decreases combined complexity,
/// stopping when no merge decreases it. Ties resolve to the lowest
/// (min index of first group, min index of second group) pair, which keeps
/// the search fully deterministic.
inline MarginalProductModel build_mpm_model(const SelectedSet& selected, std::size_t string_size,
                                            std::size_t max_group_size) {
    if (selected.size() == 0)
        throw InvariantError("build_mpm_model: selected set must be non-empty");
    if (max_group_size == 0)
        throw ConfigError("build_mpm_model: maxEcgaGroupSize must be >= 1");
    for (const auto& member : selected.members)
        if (member.size() != string_size)
            throw InvariantError("build_mpm_model: member length does not match stringSize");

    const std::size_t m = selected.size();

    struct Work {
        std::vector<std::size_t> indices;
        double entropy;
    };
    std::vector<Work> groups(string_size);
    std::vector<std::uint64_t> scratch;
    for (std::size_t v = 0; v < string_size; ++v) {
        groups[v].indices = {v};
        detail::pack_configs(selected, groups[v].indices, scratch);
        groups[v].entropy = detail::entropy_bits(scratch);
    }

    constexpr double kBlocked = std::numeric_limits<double>::infinity();
    auto pair_delta = [&](const Work& a, const Work& b, std::vector<std::size_t>& merged_out,
                          double& merged_entropy) {
        merged_out.clear();
        std::merge(a.indices.begin(), a.indices.end(), b.indices.begin(), b.indices.end(),
                   std::back_inserter(merged_out));
        detail::pack_configs(selected, merged_out, scratch);
        merged_entropy = detail::entropy_bits(scratch);
        return detail::group_cost(merged_out.size(), merged_entropy, m) -
               detail::group_cost(a.indices.size(), a.entropy, m) -
               detail::group_cost(b.indices.size(), b.entropy, m);
    };

    // delta[i][j] for i < j, kBlocked where a merge would exceed the cap.
    std::vector<std::vector<double>> delta(groups.size(),
                                           std::vector<double>(groups.size(), kBlocked));
    std::vector<std::size_t> merged_idx;
    double merged_entropy = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j)
            if (groups[i].indices.size() + groups[j].indices.size() <= max_group_size)
                delta[i][j] = pair_delta(groups[i], groups[j], merged_idx, merged_entropy);

    while (groups.size() > 1) {
        // Groups stay ordered by min index, so scanning i asc, j asc with a
        // strict comparison realizes the documented tie-break.
        std::size_t best_i = 0, best_j = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < groups.size(); ++i)
            for (std::size_t j = i + 1; j < groups.size(); ++j)
                if (delta[i][j] < best) {
                    best = delta[i][j];
                    best_i = i;
                    best_j = j;
                }
        if (best >= 0.0)
            break;

        pair_delta(groups[best_i], groups[best_j], merged_idx, merged_entropy);
        groups[best_i].indices = merged_idx;
        groups[best_i].entropy = merged_entropy;
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best_j));
        delta.erase(delta.begin() + static_cast<std::ptrdiff_t>(best_j));
        for (auto& row : delta)
            row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_j));

        for (std::size_t k = 0; k < groups.size(); ++k) {
            if (k == best_i)
                continue;
            std::size_t lo = std::min(k, best_i), hi = std::max(k, best_i);
            if (groups[lo].indices.size() + groups[hi].indices.size() <= max_group_size)
                delta[lo][hi] = pair_delta(groups[lo], groups[hi], merged_idx, merged_entropy);
            else
                delta[lo][hi] = kBlocked;
        }
    }

    std::vector<MpmGroup> final_groups;
    final_groups.reserve(groups.size());
    for (auto& g : groups) {
        detail::pack_configs(selected, g.indices, scratch);
        std::sort(scratch.begin(), scratch.end());
        MpmGroup out;
        out.indices = std::move(g.indices);
        out.config_counts = detail::count_runs(scratch);
        out.entropy_bits = g.entropy;
        final_groups.push_back(std::move(out));
    }
    return MarginalProductModel(std::move(final_groups), string_size, m);
}

} // namespace pea
