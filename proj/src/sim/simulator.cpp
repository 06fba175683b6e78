#include "mats/sim/simulator.hpp"

#include <algorithm>
#include <map>

namespace mats {

void Policy::validate() const {
    auto prob = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw ConfigError(std::string(name) + " must lie in [0, 1]");
    };
    prob(rate_post, "rate_post");
    prob(rate_follow, "rate_follow");
    prob(rate_join, "rate_join");
    prob(p_block, "p_block");
    prob(p_sync, "p_sync");
    if (window < 1) throw ConfigError("fairness window must be at least 1");
}

double Policy::weight_of(std::string_view schema) const {
    if (schema == "Post") return rate_post;
    if (schema == "Follow") return rate_follow;
    if (schema == "Initialise" || schema == "Register") return rate_join;
    if (schema == "AddBlock") return p_block;
    if (schema == kSync) return p_sync;
    return 0.0;
}

namespace {

const Schema& sync_schema(const Platform& platform) {
    for (const auto& s : platform.schemas())
        if (s.name == kSync) return s;
    throw KernelError("platform has no Sync schema");
}

}  // namespace

std::vector<Obligation> fairness_obligations(const Platform& platform, const Config& c) {
    const Schema& sync = sync_schema(platform);
    auto tuples = sync.candidates(c);
    std::sort(tuples.begin(), tuples.end());
    std::vector<Obligation> out;
    Tx probe;
    probe.schema = std::string(kSync);
    for (const auto& tuple : tuples) {
        probe.participants = tuple;
        if (!platform.fairness_rule(c, probe)) continue;
        Obligation ob;
        ob.participants = tuple;
        ob.enabled = is_enabled(sync, c, std::span<const AgentId>(tuple), Params{});
        out.push_back(std::move(ob));
    }
    return out;
}

const std::vector<Obligation>& ObligationTracker::observe(const Config& c, std::size_t k) {
    auto next = fairness_obligations(*platform_, c);
    for (auto& ob : next) {
        ob.since = k;
        if (!ob.enabled || k == 0) continue;
        auto prev = std::find_if(current_.begin(), current_.end(),
                                 [&](const Obligation& o) { return o.participants == ob.participants; });
        if (prev == current_.end() || !prev->enabled) continue;
        bool served = std::any_of(served_.begin(), served_.end(), [&](const auto& s) {
            return s.first == ob.participants && s.second + 1 == k;
        });
        if (!served) ob.since = prev->since;
    }
    current_ = std::move(next);
    served_.clear();
    return current_;
}

void ObligationTracker::taken(const Tx& t, std::size_t k) {
    if (t.schema == kSync) served_.emplace_back(t.participants, k);
}

namespace {

// Whether taking t at k still lets every obligation pending afterwards be
// served in deadline order. Obligations t itself creates count from k + 1.
bool admissible(const Platform& platform, const Config& c, std::size_t k, const Tx& t,
                const std::vector<const Obligation*>& pending, std::size_t window) {
    std::vector<std::size_t> since;
    for (const auto& ob : fairness_obligations(platform, apply_unchecked(c, t))) {
        if (!ob.enabled) continue;
        std::size_t s = k + 1;
        if (!(t.schema == kSync && t.participants == ob.participants))
            for (const auto* p : pending)
                if (p->participants == ob.participants) s = p->since;
        since.push_back(s);
    }
    std::sort(since.begin(), since.end());
    for (std::size_t j = 0; j < since.size(); ++j)
        if (since[j] + window < k + j + 2) return false;
    return true;
}

}  // namespace

namespace {

// Enabled instances of one schema on c in canonical order, skipping tuples
// `skip` rejects.
template <class Skip>
std::vector<Tx> instances_of(const Schema& schema, const Config& c, Skip skip) {
    std::vector<Tx> out;
    auto tuples = schema.candidates(c);
    std::sort(tuples.begin(), tuples.end());
    for (const auto& tuple : tuples) {
        if (skip(schema.name, tuple)) continue;
        for (const auto& p : detail::params_for(schema, c, tuple))
            if (auto t = instantiate(schema, c, std::span<const AgentId>(tuple), p)) out.push_back(std::move(*t));
    }
    return out;
}

template <class Skip>
bool any_instance(const Schema& schema, const Config& c, Skip skip) {
    for (const auto& tuple : schema.candidates(c)) {
        if (skip(schema.name, tuple)) continue;
        for (const auto& p : detail::params_for(schema, c, tuple))
            if (is_enabled(schema, c, std::span<const AgentId>(tuple), p)) return true;
    }
    return false;
}

}  // namespace

std::optional<Tx> schedule_step(const Platform& platform, const Config& c, std::size_t k,
                                const std::vector<Obligation>& obligations, const Policy& policy,
                                Rng& rng) {
    std::vector<const Obligation*> pending;
    for (const auto& ob : obligations)
        if (ob.enabled) pending.push_back(&ob);
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Obligation* a, const Obligation* b) { return a->since < b->since; });

    auto serve = [&](const Obligation& ob) {
        return instantiate(sync_schema(platform), c, std::span<const AgentId>(ob.participants), Params{});
    };

    // The j-th earliest deadline since_j + W - 1 leaves (deadline - k + 1) slots
    // for j services; when that is tight, serve the earliest now.
    for (std::size_t j = 0; j < pending.size(); ++j) {
        if (pending[j]->since + policy.window <= k + j + 1) {
            if (auto t = serve(*pending.front())) return t;
            break;
        }
    }

    auto withheld = [&](const std::string& schema, const std::vector<AgentId>& tuple) {
        if (!policy.join_before_mining || platform.uses_feeds() || schema != "AddBlock") return false;
        const AgentId& p = tuple[0];
        return !contains(platform.bootstrap(), p) && !contains(chain_of(c.at(p)).peers, p);
    };
    // Schemas are sorted by name, which fixes the order of the weighted draw.
    std::vector<const Schema*> families;
    double total = 0.0;
    for (const auto& schema : platform.schemas()) {
        double w = policy.weight_of(schema.name);
        if (w <= 0.0 || !any_instance(schema, c, withheld)) continue;
        families.push_back(&schema);
        total += w;
    }
    if (families.empty()) {
        if (!pending.empty()) return serve(*pending.front());
        return std::nullopt;
    }
    double x = rng.uniform() * total;
    const Schema* chosen = families.back();
    for (const auto* f : families) {
        double w = policy.weight_of(f->name);
        if (x < w) {
            chosen = f;
            break;
        }
        x -= w;
    }
    auto options = instances_of(*chosen, c, withheld);
    Tx& t = options[rng.below(options.size())];
    if (!pending.empty() && !admissible(platform, c, k, t, pending, policy.window)) return serve(*pending.front());
    return std::move(t);
}

namespace {

void record(Trace& trace, Tx t) {
    TraceStep step;
    step.index = trace.steps.size();
    step.active = participants_of(t).active;
    trace.configs.push_back(apply_unchecked(trace.configs.back(), t));
    step.digest = digest(trace.configs.back());
    step.tx = std::move(t);
    trace.steps.push_back(std::move(step));
}

}  // namespace

Trace run_simulation(const PlatformConfig& config, const Policy& policy) {
    config.validate();
    policy.validate();
    Platform platform(config);
    Rng rng(policy.seed);
    Trace trace;
    trace.platform = platform.config();
    trace.policy = policy;
    trace.configs.push_back(platform.initial_configuration());
    ObligationTracker tracker(platform);
    for (std::size_t k = 0; k < policy.max_steps; ++k) {
        const Config& c = trace.configs.back();
        const auto& obligations = tracker.observe(c, k);
        auto t = schedule_step(platform, c, k, obligations, policy, rng);
        if (!t) {
            trace.quiescent = true;
            break;
        }
        tracker.taken(*t, k);
        record(trace, std::move(*t));
    }
    return trace;
}

Trace make_trace(const PlatformConfig& config, const Policy& policy, const std::vector<Tx>& steps) {
    Platform platform(config);
    Trace trace;
    trace.platform = platform.config();
    trace.policy = policy;
    trace.configs.push_back(platform.initial_configuration());
    for (const auto& t : steps) {
        apply(platform.schemas(), trace.configs.back(), t);  // throws if not enabled
        record(trace, t);
    }
    return trace;
}

FairnessVerdict check_fairness(const Trace& trace, std::size_t window) {
    FairnessVerdict out;
    out.window = window;
    Platform platform(trace.platform);
    ObligationTracker tracker(platform);
    for (std::size_t k = 0; k < trace.configs.size(); ++k) {
        for (const auto& ob : tracker.observe(trace.configs[k], k)) {
            if (!ob.enabled) continue;
            out.max_wait = std::max(out.max_wait, k - ob.since);
            if (k - ob.since >= window && out.fair) {
                out.fair = false;
                out.violation_at = k;
                out.participants = ob.participants;
            }
        }
        if (k < trace.steps.size()) tracker.taken(trace.steps[k].tx, k);
    }
    return out;
}

}  // namespace mats
