#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "mats/kernel/agent.hpp"
#include "mats/kernel/error.hpp"
#include "mats/kernel/hash.hpp"

namespace mats {

/// A total map from a finite, nonempty agent set P to local states (c in S^P).
/// Agents are kept sorted; states are stored in the same order.
template <class State>
class Configuration {
public:
    Configuration() = default;

    /// The initial configuration {s0}^P.
    Configuration(AgentSet agents, const State& initial) : agents_(std::move(agents)) {
        normalise(agents_);
        states_.assign(agents_.size(), initial);
    }

    explicit Configuration(std::vector<std::pair<AgentId, State>> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i].first == entries[i - 1].first)
                throw KernelError("configuration lists agent '" + entries[i].first.str() + "' twice");
        }
        agents_.reserve(entries.size());
        states_.reserve(entries.size());
        for (auto& [id, s] : entries) {
            agents_.push_back(std::move(id));
            states_.push_back(std::move(s));
        }
    }

    const AgentSet& agents() const noexcept { return agents_; }
    const std::vector<State>& states() const noexcept { return states_; }
    std::size_t size() const noexcept { return agents_.size(); }

    bool has(const AgentId& id) const { return index_of(id) != npos; }

    const State& at(const AgentId& id) const { return states_[checked_index(id)]; }
    State& at(const AgentId& id) { return states_[checked_index(id)]; }

    const State& state(std::size_t i) const { return states_.at(i); }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t index_of(const AgentId& id) const {
        auto it = std::lower_bound(agents_.begin(), agents_.end(), id);
        if (it == agents_.end() || *it != id) return npos;
        return static_cast<std::size_t>(it - agents_.begin());
    }

    std::size_t checked_index(const AgentId& id) const {
        std::size_t i = index_of(id);
        if (i == npos) throw KernelError("agent '" + id.str() + "' is not in the configuration");
        return i;
    }

    AgentSet agents_;
    std::vector<State> states_;
};

/// c/P: restriction of c to P. P must be a nonempty subset of agents(c).
template <class State>
Configuration<State> project(const Configuration<State>& c, AgentSet subset) {
    normalise(subset);
    if (subset.empty()) throw KernelError("projection onto an empty agent set");
    std::vector<std::pair<AgentId, State>> entries;
    entries.reserve(subset.size());
    for (const auto& id : subset) {
        if (!c.has(id)) throw KernelError("projection set is not a subset: '" + id.str() + "' is absent");
        entries.emplace_back(id, c.at(id));
    }
    return Configuration<State>(std::move(entries));
}

template <class State>
struct ConfigurationHash {
    std::size_t operator()(const Configuration<State>& c) const {
        std::size_t seed = c.size();
        for (std::size_t i = 0; i < c.size(); ++i) {
            hash_combine(seed, std::hash<AgentId>{}(c.agents()[i]));
            hash_combine(seed, std::hash<State>{}(c.state(i)));
        }
        return seed;
    }
};

}  // namespace mats
