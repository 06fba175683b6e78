#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mats/kernel/agent.hpp"
#include "mats/kernel/error.hpp"

namespace mats {

/// Schema parameters as (key, value) pairs sorted by key. The sorted encoding
/// doubles as the canonical parameter order.
using Params = std::vector<std::pair<std::string, std::string>>;

inline Params make_params(Params p) {
    std::sort(p.begin(), p.end());
    return p;
}

inline const std::string* find_param(const Params& params, std::string_view key) {
    for (const auto& [k, v] : params)
        if (k == key) return &v;
    return nullptr;
}

/// A transaction instance t = c -> c' over its participants Q. Participants
/// are listed in the schema's role order; before/after are aligned with them.
template <class State>
struct Transaction {
    std::string schema;
    std::vector<AgentId> participants;
    Params params;
    std::vector<State> before;
    std::vector<State> after;

    bool well_formed() const {
        if (participants.empty() || before.size() != participants.size() ||
            after.size() != participants.size())
            return false;
        AgentSet q(participants.begin(), participants.end());
        normalise(q);
        return q.size() == participants.size();
    }

    /// Index of an agent among the participants, or size() when absent.
    std::size_t position(const AgentId& id) const {
        auto it = std::find(participants.begin(), participants.end(), id);
        return static_cast<std::size_t>(it - participants.begin());
    }

    bool same_instance(const Transaction& other) const {
        return schema == other.schema && participants == other.participants &&
               params == other.params;
    }

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct ParticipantSplit {
    AgentSet active;
    AgentSet stationary;
};

template <class State>
ParticipantSplit participants_of(const Transaction<State>& t) {
    if (!t.well_formed()) throw KernelError("malformed transaction '" + t.schema + "'");
    ParticipantSplit out;
    for (std::size_t i = 0; i < t.participants.size(); ++i)
        (t.before[i] == t.after[i] ? out.stationary : out.active).push_back(t.participants[i]);
    normalise(out.active);
    normalise(out.stationary);
    return out;
}

/// Number of active participants.
template <class State>
std::size_t degree(const Transaction<State>& t) {
    return participants_of(t).active.size();
}

template <class State>
std::size_t degree_of_set(const std::vector<Transaction<State>>& ts) {
    if (ts.empty()) throw KernelError("degree of an empty transaction set is undefined");
    std::size_t d = 0;
    for (const auto& t : ts) d = std::max(d, degree(t));
    return d;
}

/// Canonical order: schema name, participant list, parameter encoding.
template <class State>
bool canonical_less(const Transaction<State>& a, const Transaction<State>& b) {
    if (a.schema != b.schema) return a.schema < b.schema;
    if (a.participants != b.participants) return a.participants < b.participants;
    return a.params < b.params;
}

}  // namespace mats
