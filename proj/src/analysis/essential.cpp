#include "mats/analysis/essential.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace mats {

const char* to_string(Communication c) {
    switch (c) {
        case Communication::communicates: return "communicates";
        case Communication::silent: return "silent";
        case Communication::budget_exhausted: return "budget-exhausted";
    }
    return "?";
}

const char* to_string(PlatformClass c) {
    switch (c) {
        case PlatformClass::centralised: return "Centralised";
        case PlatformClass::decentralised: return "Decentralised";
        case PlatformClass::federated: return "Federated";
        case PlatformClass::grassroots: return "Grassroots";
        case PlatformClass::unclassified: return "unclassified";
    }
    return "?";
}

CommunicationOracle::CommunicationOracle(Platform universe, std::size_t depth, std::size_t node_budget)
    : universe_(std::move(universe)), depth_(depth), budget_(node_budget) {}

Communication CommunicationOracle::communicates(const AgentSet& p) {
    AgentSet key = p;
    normalise(key);
    {
        std::lock_guard lock(mu_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second.verdict;
    }
    Platform sub = universe_.restrict(key);
    ReachGoal<LocalState> goal;
    goal.on_transition = [](const Tx& t) { return degree(t) >= 2; };
    auto r = bounded_reach(sub.schemas(), sub.initial_configuration(), depth_, goal, budget_);
    Entry e;
    switch (r.verdict) {
        case ReachVerdict::found: e.verdict = Communication::communicates; break;
        case ReachVerdict::not_found: e.verdict = Communication::silent; break;
        case ReachVerdict::budget_exhausted: e.verdict = Communication::budget_exhausted; break;
    }
    e.witness = std::move(r.witness);
    std::lock_guard lock(mu_);
    return memo_.emplace(std::move(key), std::move(e)).first->second.verdict;
}

std::vector<Tx> CommunicationOracle::witness(const AgentSet& p) const {
    AgentSet key = p;
    normalise(key);
    std::lock_guard lock(mu_);
    auto it = memo_.find(key);
    return it == memo_.end() ? std::vector<Tx>{} : it->second.witness;
}

std::size_t CommunicationOracle::queries() const {
    std::lock_guard lock(mu_);
    return memo_.size();
}

namespace {

using Mask = std::uint64_t;

bool by_size_then_members(const AgentSet& a, const AgentSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
}

}  // namespace

std::vector<AgentSet> minimal_hitting_sets(const std::vector<AgentSet>& family) {
    AgentSet ground;
    for (const auto& s : family) ground.insert(ground.end(), s.begin(), s.end());
    normalise(ground);
    if (ground.size() > 64) throw KernelError("hitting-set ground set too large");
    auto index = [&](const AgentId& a) {
        return static_cast<std::size_t>(std::lower_bound(ground.begin(), ground.end(), a) - ground.begin());
    };

    std::vector<Mask> edges;
    for (const auto& s : family) {
        if (s.empty()) return {};  // nothing hits the empty set
        Mask m = 0;
        for (const auto& a : s) m |= Mask{1} << index(a);
        edges.push_back(m);
    }

    // Berge: fold the edges in one at a time, keeping only minimal transversals.
    std::vector<Mask> current{0};
    for (Mask e : edges) {
        std::vector<Mask> next;
        for (Mask t : current) {
            if (t & e) {
                next.push_back(t);
                continue;
            }
            for (Mask bit = e; bit; bit &= bit - 1) next.push_back(t | (bit & -bit));
        }
        std::sort(next.begin(), next.end(),
                  [](Mask a, Mask b) { return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b; });
        next.erase(std::unique(next.begin(), next.end()), next.end());
        current.clear();
        for (Mask t : next) {
            bool dominated = std::any_of(current.begin(), current.end(), [&](Mask k) { return (k & t) == k; });
            if (!dominated) current.push_back(t);
        }
    }

    std::vector<AgentSet> out;
    for (Mask t : current) {
        AgentSet s;
        for (std::size_t i = 0; i < ground.size(); ++i)
            if (t >> i & 1) s.push_back(ground[i]);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), by_size_then_members);
    return out;
}

std::vector<AgentSet> minimal_communicating_sets(CommunicationOracle& oracle, bool* bounded) {
    const AgentSet& u = oracle.universe().agents();
    const std::size_t n = u.size();
    if (n > 20) throw KernelError("universe too large for exact subset enumeration");
    std::vector<Mask> found;
    std::vector<AgentSet> out;
    if (bounded) *bounded = false;
    for (std::size_t k = 1; k <= n; ++k) {
        // Gosper's hack walks the k-subsets in increasing mask order.
        for (Mask m = (Mask{1} << k) - 1; m < (Mask{1} << n);) {
            bool pruned = std::any_of(found.begin(), found.end(), [&](Mask f) { return (f & m) == f; });
            if (!pruned) {
                AgentSet p;
                for (std::size_t i = 0; i < n; ++i)
                    if (m >> i & 1) p.push_back(u[i]);
                auto v = oracle.communicates(p);
                if (v == Communication::budget_exhausted && bounded) *bounded = true;
                if (v != Communication::silent) {
                    found.push_back(m);
                    out.push_back(std::move(p));
                }
            }
            Mask c = m & -m, r = m + c;
            m = (((r ^ m) >> 2) / c) | r;
        }
    }
    std::sort(out.begin(), out.end(), by_size_then_members);
    return out;
}

Role unbounded_role(PlatformKind kind) {
    switch (kind) {
        case PlatformKind::centralised:
        case PlatformKind::federated: return Role::client;
        default: return Role::peer;
    }
}

EssentialReport minimal_essential_sets(CommunicationOracle& oracle) {
    const Platform& u = oracle.universe();
    EssentialReport r;
    r.kind = u.kind();
    r.universe = u.agents();
    for (const auto& id : r.universe) r.roles[id] = u.role(id);
    r.depth = oracle.depth();
    bool bounded = false;
    r.communicating = minimal_communicating_sets(oracle, &bounded);
    r.exact = !bounded;

    // A set holding every member of the unbounded role has no finite
    // counterpart in the infinite universe, so it never yields a class
    // cardinality. Grassroots is exempt: its single role is the universe.
    const AgentSet everyone = u.with_role(unbounded_role(u.kind()));
    for (auto& s : minimal_hitting_sets(r.communicating)) {
        bool covers = u.kind() != PlatformKind::grassroots && everyone.size() > 0 && is_subset(everyone, s);
        (covers ? r.excluded_sets : r.minimal_sets).push_back(std::move(s));
    }
    if (r.minimal_sets.empty()) std::swap(r.minimal_sets, r.excluded_sets);
    if (!r.minimal_sets.empty()) {
        r.min_cardinality = r.minimal_sets.front().size();
        for (const auto& s : r.minimal_sets)
            if (s.size() == r.min_cardinality) r.minimum_sets.push_back(s);
    }
    return r;
}

EssentialReport minimal_essential_sets(const PlatformConfig& universe, std::size_t depth,
                                       std::size_t node_budget) {
    universe.validate();
    CommunicationOracle oracle(Platform(universe), depth, node_budget);
    return minimal_essential_sets(oracle);
}

bool ClassReport::exact() const {
    return std::all_of(universes.begin(), universes.end(), [](const EssentialReport& r) { return r.exact; });
}

std::vector<PlatformConfig> default_family(PlatformKind kind) {
    std::vector<PlatformConfig> out;
    switch (kind) {
        case PlatformKind::centralised:
            for (std::size_t n = 2; n <= 5; ++n) out.push_back(make_universe(kind, n));
            break;
        case PlatformKind::bitcoin:
        case PlatformKind::decentralised:
            for (std::size_t n = 1; n <= 4; ++n) out.push_back(make_universe(kind, n, 0, 2));
            break;
        case PlatformKind::federated:
            for (std::size_t k = 2; k <= 4; ++k) out.push_back(make_universe(kind, k, k));
            break;
        case PlatformKind::grassroots:
            for (std::size_t n = 3; n <= 6; ++n) out.push_back(make_universe(kind, n));
            break;
    }
    return out;
}

namespace {

bool contains_set(const std::vector<AgentSet>& sets, const AgentSet& s) {
    return std::find(sets.begin(), sets.end(), s) != sets.end();
}

}  // namespace

ClassReport classify(PlatformKind kind, const std::vector<PlatformConfig>& family, std::size_t depth,
                     std::size_t node_budget) {
    if (family.size() < 3) throw ConfigError("classification needs at least three universe sizes");
    ClassReport out;
    out.kind = kind;
    std::vector<AgentSet> servers, bootstraps;
    for (const auto& cfg : family) {
        if (cfg.kind != kind) throw ConfigError("universe family mixes platforms");
        out.universes.push_back(minimal_essential_sets(cfg, depth, node_budget));
        Platform p(cfg);
        servers.push_back(p.with_role(Role::server));
        bootstraps.push_back(p.bootstrap());
    }
    const auto& us = out.universes;

    bool central = std::all_of(us.begin(), us.end(), [](const auto& r) { return r.min_cardinality == 1; });

    bool grass = std::all_of(us.begin(), us.end(), [](const auto& r) {
        return !r.minimal_sets.empty() && std::all_of(r.minimal_sets.begin(), r.minimal_sets.end(), [&](const AgentSet& e) {
            return r.universe.size() - e.size() <= 1;
        });
    });

    bool decent = us.front().min_cardinality > 1;
    for (std::size_t i = 0; i < us.size(); ++i)
        decent = decent && us[i].min_cardinality == us.front().min_cardinality && !bootstraps[i].empty() &&
                 bootstraps[i] == bootstraps.front() && contains_set(us[i].minimum_sets, bootstraps[i]);

    bool fed = true;
    for (std::size_t i = 0; i < us.size(); ++i) {
        fed = fed && !servers[i].empty() && us[i].min_cardinality == servers[i].size() &&
              contains_set(us[i].minimum_sets, servers[i]);
        if (i > 0) fed = fed && servers[i].size() > servers[i - 1].size();
    }

    out.predicates = {{PlatformClass::centralised, central},
                      {PlatformClass::decentralised, decent},
                      {PlatformClass::federated, fed},
                      {PlatformClass::grassroots, grass}};
    int matched = central + decent + fed + grass;
    if (matched == 1) {
        for (const auto& [c, ok] : out.predicates)
            if (ok) out.verdict = c;
    }
    return out;
}

namespace {

nlohmann::ordered_json ids(const AgentSet& s) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& id : s) a.push_back(id.str());
    return a;
}

nlohmann::ordered_json sets(const std::vector<AgentSet>& v) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& s : v) a.push_back(ids(s));
    return a;
}

}  // namespace

nlohmann::ordered_json to_json(const EssentialReport& r) {
    nlohmann::ordered_json j;
    j["platform"] = std::string(to_string(r.kind));
    auto agents = nlohmann::ordered_json::array();
    for (const auto& [id, role] : r.roles)
        agents.push_back({{"id", id.str()}, {"role", std::string(to_string(role))}});
    j["universe"] = std::move(agents);
    j["depth"] = r.depth;
    j["communicating_sets"] = sets(r.communicating);
    j["minimal_sets"] = sets(r.minimal_sets);
    j["excluded_sets"] = sets(r.excluded_sets);
    j["min_cardinality"] = r.min_cardinality;
    j["minimum_sets"] = sets(r.minimum_sets);
    j["quality"] = r.quality();
    return j;
}

nlohmann::ordered_json to_json(const ClassReport& r) {
    nlohmann::ordered_json j;
    j["platform"] = std::string(to_string(r.kind));
    auto universes = nlohmann::ordered_json::array();
    auto scaling = nlohmann::ordered_json::array();
    for (const auto& u : r.universes) {
        universes.push_back(to_json(u));
        scaling.push_back({u.universe.size(), u.min_cardinality});
    }
    j["universes"] = std::move(universes);
    j["scaling"] = std::move(scaling);
    const auto& last = r.universes.back();
    j["minimal_sets"] = sets(last.minimal_sets);
    j["min_cardinality"] = last.min_cardinality;
    auto preds = nlohmann::ordered_json::object();
    for (const auto& [c, ok] : r.predicates) preds[to_string(c)] = ok;
    j["patterns"] = std::move(preds);
    j["class"] = to_string(r.verdict);
    j["quality"] = r.exact() ? "exact" : "bounded";
    return j;
}

}  // namespace mats
