#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mats/kernel/schema.hpp"

namespace mats {

enum class ReachVerdict { found, not_found, budget_exhausted };

inline const char* to_string(ReachVerdict v) {
    switch (v) {
        case ReachVerdict::found: return "found";
        case ReachVerdict::not_found: return "not-found";
        case ReachVerdict::budget_exhausted: return "budget-exhausted";
    }
    return "?";
}

inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

/// Exploration budget, overridable through EA_NODE_BUDGET.
inline std::size_t default_node_budget() {
    if (const char* env = std::getenv("EA_NODE_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultNodeBudget;
}

template <class State>
struct ReachGoal {
    // Either may be empty. on_transition fires on each generated instance
    // before it is applied; on_config on every newly visited configuration.
    std::function<bool(const Configuration<State>&)> on_config;
    std::function<bool(const Transaction<State>&)> on_transition;
};

template <class State>
struct ReachResult {
    ReachVerdict verdict = ReachVerdict::not_found;
    std::vector<Transaction<State>> witness;  // computation from the start configuration
    Configuration<State> reached;             // configuration at the end of the witness
    std::size_t explored = 0;                 // distinct configurations visited
};

/// Breadth-first search from `start` up to `depth` transitions. Children are
/// generated in canonical instance order, so the first witness found is a
/// shortest one and identical inputs give identical witnesses.
template <class State>
ReachResult<State> bounded_reach(const SchemaSet<State>& schemas, const Configuration<State>& start,
                                 std::size_t depth, const ReachGoal<State>& goal,
                                 std::size_t node_budget = default_node_budget()) {
    struct Node {
        Configuration<State> config;
        std::size_t parent;
        Transaction<State> via;
    };
    constexpr std::size_t root = static_cast<std::size_t>(-1);

    ReachResult<State> result;
    std::vector<Node> nodes;
    std::unordered_multimap<std::size_t, std::size_t> seen;
    ConfigurationHash<State> hasher;

    auto witness_to = [&](std::size_t idx) {
        std::vector<Transaction<State>> path;
        for (std::size_t i = idx; i != 0; i = nodes[i].parent) path.push_back(nodes[i].via);
        return std::vector<Transaction<State>>(path.rbegin(), path.rend());
    };

    result.explored = 1;
    if (goal.on_config && goal.on_config(start)) {
        result.verdict = ReachVerdict::found;
        result.reached = start;
        return result;
    }
    nodes.push_back(Node{start, root, {}});  // index 0 is the start; its `via` is unused
    seen.emplace(hasher(start), 0);

    std::size_t level_begin = 0;
    bool exhausted = false;
    for (std::size_t level = 0; level < depth; ++level) {
        std::size_t level_end = nodes.size();
        if (level_begin == level_end) break;
        for (std::size_t idx = level_begin; idx < level_end; ++idx) {
            auto instances = enabled_instances(schemas, nodes[idx].config);
            for (auto& t : instances) {
                if (goal.on_transition && goal.on_transition(t)) {
                    auto path = witness_to(idx);
                    result.reached = apply_unchecked(nodes[idx].config, t);
                    path.push_back(std::move(t));
                    result.witness = std::move(path);
                    result.verdict = ReachVerdict::found;
                    return result;
                }
                auto next = apply_unchecked(nodes[idx].config, t);
                std::size_t h = hasher(next);
                bool dup = false;
                auto [lo, hi] = seen.equal_range(h);
                for (auto it = lo; it != hi; ++it)
                    if (nodes[it->second].config == next) { dup = true; break; }
                if (dup) continue;
                if (nodes.size() >= node_budget) {
                    exhausted = true;
                    continue;
                }
                nodes.push_back(Node{std::move(next), idx, std::move(t)});
                seen.emplace(h, nodes.size() - 1);
                ++result.explored;
                if (goal.on_config && goal.on_config(nodes.back().config)) {
                    result.verdict = ReachVerdict::found;
                    result.reached = nodes.back().config;
                    result.witness = witness_to(nodes.size() - 1);
                    return result;
                }
            }
        }
        level_begin = level_end;
    }
    result.verdict = exhausted ? ReachVerdict::budget_exhausted : ReachVerdict::not_found;
    return result;
}

/// All configurations reachable from `start` within `depth` transitions, in
/// BFS order. `complete` is false when the budget cut exploration short.
template <class State>
struct ReachableSet {
    std::vector<Configuration<State>> configs;
    bool complete = true;
};

template <class State>
ReachableSet<State> reachable_configurations(const SchemaSet<State>& schemas,
                                             const Configuration<State>& start, std::size_t depth,
                                             std::size_t node_budget = default_node_budget()) {
    ReachableSet<State> out;
    std::unordered_multimap<std::size_t, std::size_t> seen;
    ConfigurationHash<State> hasher;
    out.configs.push_back(start);
    seen.emplace(hasher(start), 0);
    std::size_t level_begin = 0;
    for (std::size_t level = 0; level < depth; ++level) {
        std::size_t level_end = out.configs.size();
        if (level_begin == level_end) break;
        for (std::size_t idx = level_begin; idx < level_end; ++idx) {
            for (const auto& t : enabled_instances(schemas, out.configs[idx])) {
                auto next = apply_unchecked(out.configs[idx], t);
                std::size_t h = hasher(next);
                bool dup = false;
                auto [lo, hi] = seen.equal_range(h);
                for (auto it = lo; it != hi; ++it)
                    if (out.configs[it->second] == next) { dup = true; break; }
                if (dup) continue;
                if (out.configs.size() >= node_budget) {
                    out.complete = false;
                    return out;
                }
                out.configs.push_back(std::move(next));
                seen.emplace(h, out.configs.size() - 1);
            }
        }
        level_begin = level_end;
    }
    return out;
}

}  // namespace mats
