#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mats/kernel/configuration.hpp"
#include "mats/kernel/transaction.hpp"

namespace mats {

/// Intensional representation of a (usually infinite) transaction family and
/// its closure: instances are produced by matching guard and effect against a
/// concrete configuration over any P containing the participants.
template <class State>
struct TransactionSchema {
    using Config = Configuration<State>;
    using Tuple = std::vector<AgentId>;

    std::string name;
    std::size_t arity = 1;
    // Candidate participant tuples, in role order, drawn from agents(c).
    std::function<std::vector<Tuple>(const Config&)> candidates;
    // Finite parameter generator. Absent means the single empty parameter record.
    std::function<std::vector<Params>(const Config&, std::span<const AgentId>)> params;
    std::function<bool(const Config&, std::span<const AgentId>, const Params&)> guard;
    // Defined exactly when guard holds; returns after-states aligned with the tuple.
    std::function<std::vector<State>(const Config&, std::span<const AgentId>, const Params&)> effect;
    // Set when guard(c) already implies that the effect changes c, so
    // enabledness can be decided without running the effect.
    bool exact_guard = false;
};

template <class State>
using SchemaSet = std::vector<TransactionSchema<State>>;

/// A local-states function S: P -> 2^S, given as a membership test.
/// Must be monotone in P and admit the initial state for every nonempty P.
template <class State>
struct LocalStatesPredicate {
    std::function<bool(const State&, const AgentSet&)> contains;
    State initial;
};

namespace detail {

template <class State>
std::vector<Params> params_for(const TransactionSchema<State>& schema, const Configuration<State>& c,
                               std::span<const AgentId> tuple) {
    if (!schema.params) return {Params{}};
    auto ps = schema.params(c, tuple);
    std::sort(ps.begin(), ps.end());
    return ps;
}

template <class State>
std::vector<State> before_states(const Configuration<State>& c, std::span<const AgentId> tuple) {
    std::vector<State> out;
    out.reserve(tuple.size());
    for (const auto& id : tuple) out.push_back(c.at(id));
    return out;
}

}  // namespace detail

/// Instance of one schema at (tuple, params), if its guard holds and the
/// effect changes the configuration.
template <class State>
std::optional<Transaction<State>> instantiate(const TransactionSchema<State>& schema,
                                              const Configuration<State>& c,
                                              std::span<const AgentId> tuple, const Params& params) {
    for (const auto& id : tuple)
        if (!c.has(id)) return std::nullopt;
    if (!schema.guard(c, tuple, params)) return std::nullopt;
    Transaction<State> t;
    t.schema = schema.name;
    t.participants.assign(tuple.begin(), tuple.end());
    t.params = params;
    t.before = detail::before_states(c, tuple);
    t.after = schema.effect(c, tuple, params);
    if (t.after.size() != t.before.size())
        throw KernelError("schema '" + schema.name + "' produced a malformed effect");
    if (t.after == t.before) return std::nullopt;  // a transaction changes the configuration
    return t;
}

/// Whether instantiate() would succeed, avoiding the effect when the guard is exact.
template <class State>
bool is_enabled(const TransactionSchema<State>& schema, const Configuration<State>& c,
                std::span<const AgentId> tuple, const Params& params) {
    for (const auto& id : tuple)
        if (!c.has(id)) return false;
    if (!schema.guard(c, tuple, params)) return false;
    if (schema.exact_guard) return true;
    auto after = schema.effect(c, tuple, params);
    for (std::size_t i = 0; i < tuple.size(); ++i)
        if (!(after.at(i) == c.at(tuple[i]))) return true;
    return false;
}

/// Every enabled instance of every schema on c, in canonical order.
template <class State>
std::vector<Transaction<State>> enabled_instances(const SchemaSet<State>& schemas,
                                                  const Configuration<State>& c) {
    std::vector<Transaction<State>> out;
    for (const auto& schema : schemas) {
        auto tuples = schema.candidates(c);
        std::sort(tuples.begin(), tuples.end());
        for (const auto& tuple : tuples) {
            for (const auto& p : detail::params_for(schema, c, tuple)) {
                if (auto t = instantiate(schema, c, tuple, p)) out.push_back(std::move(*t));
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), canonical_less<State>);
    return out;
}

template <class State>
std::vector<Transaction<State>> enabled_instances_of(const SchemaSet<State>& schemas,
                                                     const Configuration<State>& c,
                                                     std::string_view schema_name) {
    std::vector<Transaction<State>> out;
    for (const auto& schema : schemas) {
        if (schema.name != schema_name) continue;
        auto tuples = schema.candidates(c);
        std::sort(tuples.begin(), tuples.end());
        for (const auto& tuple : tuples)
            for (const auto& p : detail::params_for(schema, c, tuple))
                if (auto t = instantiate(schema, c, tuple, p)) out.push_back(std::move(*t));
    }
    return out;
}

/// Applies t under closure semantics without re-checking enabledness.
template <class State>
Configuration<State> apply_unchecked(Configuration<State> c, const Transaction<State>& t) {
    for (std::size_t i = 0; i < t.participants.size(); ++i) c.at(t.participants[i]) = t.after[i];
    return c;
}

/// Applies t to c. Participants take their after-states; everyone else is stationary.
template <class State>
Configuration<State> apply(const SchemaSet<State>& schemas, const Configuration<State>& c,
                           const Transaction<State>& t) {
    auto it = std::find_if(schemas.begin(), schemas.end(),
                           [&](const auto& s) { return s.name == t.schema; });
    if (it == schemas.end()) throw KernelError("unknown schema '" + t.schema + "'");
    if (!t.well_formed()) throw KernelError("malformed transaction '" + t.schema + "'");
    for (const auto& id : t.participants)
        if (!c.has(id)) throw KernelError("participant '" + id.str() + "' is not in the configuration");
    if (detail::before_states(c, t.participants) != t.before)
        throw KernelError("transaction '" + t.schema + "' does not start from this configuration");
    if (!it->guard(c, t.participants, t.params))
        throw KernelError("transaction '" + t.schema + "' is not enabled: guard of " + t.schema +
                          " violated");
    if (it->effect(c, t.participants, t.params) != t.after)
        throw KernelError("transaction '" + t.schema + "' does not match the effect of " + t.schema);
    return apply_unchecked(c, t);
}

/// True iff every local state of c is in S(P).
template <class State>
bool in_configuration_space(const Configuration<State>& c, const AgentSet& agents,
                            const LocalStatesPredicate<State>& pred) {
    for (const auto& s : c.states())
        if (!pred.contains(s, agents)) return false;
    return true;
}

}  // namespace mats
