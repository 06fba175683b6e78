#pragma once

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <vector>

#include "mats/kernel/hash.hpp"
#include "mats/kernel/transaction.hpp"

namespace mats {

namespace detail {

// Key identifying the "rest" of a transaction once agent q is blanked out:
// the participant list and the transitions of everyone but q. Schema names and
// params are labels, not part of the transition, so they are ignored.
template <class State>
std::size_t rest_hash(const Transaction<State>& t, std::size_t q_pos) {
    std::size_t seed = t.participants.size();
    for (std::size_t i = 0; i < t.participants.size(); ++i) {
        hash_combine(seed, std::hash<AgentId>{}(t.participants[i]));
        if (i == q_pos) continue;
        hash_combine(seed, std::hash<State>{}(t.before[i]));
        hash_combine(seed, std::hash<State>{}(t.after[i]));
    }
    return seed;
}

template <class State>
bool same_rest(const Transaction<State>& a, const Transaction<State>& b, std::size_t q_pos) {
    if (a.participants != b.participants) return false;
    for (std::size_t i = 0; i < a.participants.size(); ++i) {
        if (i == q_pos) continue;
        if (!(a.before[i] == b.before[i]) || !(a.after[i] == b.after[i])) return false;
    }
    return true;
}

}  // namespace detail

/// q is redundant in t (given T) when for every s in S some t' in T over the
/// same participants has t'_q = s -> s and agrees with t on everyone else.
template <class State>
bool is_redundant(const AgentId& q, const Transaction<State>& t,
                  const std::vector<Transaction<State>>& set, const std::vector<State>& states) {
    if (states.empty()) throw KernelError("is_redundant needs a nonempty local-state set");
    std::size_t pos = t.position(q);
    if (pos == t.participants.size() || !(t.before[pos] == t.after[pos]))
        throw KernelError("agent '" + q.str() + "' is not a stationary participant of '" + t.schema + "'");
    for (const auto& s : states) {
        bool witnessed = false;
        for (const auto& other : set) {
            if (other.participants.size() != t.participants.size() || other.position(q) != pos) continue;
            if (other.before[pos] == s && other.after[pos] == s && detail::same_rest(t, other, pos)) {
                witnessed = true;
                break;
            }
        }
        if (!witnessed) return false;
    }
    return true;
}

/// A set is concise if no transaction in it has a redundant stationary participant.
/// Transactions are bucketed by everything except one stationary agent, so each
/// (t, q) pair only scans the candidates that can witness it.
template <class State>
bool is_concise(const std::vector<Transaction<State>>& set, const std::vector<State>& states) {
    if (set.empty()) return true;
    if (states.empty()) throw KernelError("is_concise needs a nonempty local-state set");

    // (stationary position, rest hash) -> transactions stationary at that position
    std::unordered_multimap<std::size_t, std::pair<std::size_t, std::size_t>> buckets;
    auto bucket_key = [](std::size_t pos, std::size_t rest) {
        std::size_t k = pos;
        hash_combine(k, rest);
        return k;
    };
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& t = set[i];
        for (std::size_t pos = 0; pos < t.participants.size(); ++pos)
            if (t.before[pos] == t.after[pos])
                buckets.emplace(bucket_key(pos, detail::rest_hash(t, pos)), std::pair{i, pos});
    }

    for (const auto& t : set) {
        for (std::size_t pos = 0; pos < t.participants.size(); ++pos) {
            if (!(t.before[pos] == t.after[pos])) continue;
            std::vector<const State*> witnessed;
            auto [lo, hi] = buckets.equal_range(bucket_key(pos, detail::rest_hash(t, pos)));
            for (auto it = lo; it != hi; ++it) {
                const auto& other = set[it->second.first];
                if (it->second.second == pos && detail::same_rest(t, other, pos))
                    witnessed.push_back(&other.before[pos]);
            }
            bool all = std::all_of(states.begin(), states.end(), [&](const State& s) {
                return std::any_of(witnessed.begin(), witnessed.end(),
                                   [&](const State* w) { return *w == s; });
            });
            if (all) return false;
        }
    }
    return true;
}

}  // namespace mats
