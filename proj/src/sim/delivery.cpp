#include "mats/sim/delivery.hpp"

#include <algorithm>

namespace mats {

std::size_t delivered_count(const Platform& platform, const Config& c, const AgentId& poster,
                            const AgentId& follower) {
    if (!platform.uses_feeds()) return chain_of(c.at(follower)).chain.posts_by(poster).size();
    std::size_t best = 0;
    for (const auto& [key, posts] : feeds_of(c.at(follower)).feeds)
        if (key.agent == poster) best = std::max(best, posts.size());
    return best;
}

DeliveryPath minimal_delivery_path(const Platform& platform, const AgentId& poster,
                                   const AgentId& follower, std::size_t depth, std::size_t node_budget) {
    if (poster == follower) throw KernelError("poster and follower must differ");
    for (const auto& id : {poster, follower})
        if (!contains(platform.agents(), id)) throw KernelError("unknown agent '" + id.str() + "'");

    DeliveryPath out;
    auto goal = [&](std::size_t n) {
        ReachGoal<LocalState> g;
        g.on_config = [&, n](const Config& c) { return delivered_count(platform, c, poster, follower) >= n; };
        return g;
    };
    auto first = bounded_reach(platform.schemas(), platform.initial_configuration(), depth, goal(1), node_budget);
    out.initial_verdict = first.verdict;
    if (first.verdict != ReachVerdict::found) return out;
    out.initial = std::move(first.witness);
    std::size_t have = delivered_count(platform, first.reached, poster, follower);
    auto second = bounded_reach(platform.schemas(), first.reached, depth, goal(have + 1), node_budget);
    out.subsequent_verdict = second.verdict;
    if (second.verdict == ReachVerdict::found) out.subsequent = std::move(second.witness);
    return out;
}

PlatformConfig delivery_universe(PlatformKind kind) {
    PlatformConfig cfg;
    cfg.kind = kind;
    auto add = [&](const char* id, Role r, std::optional<AgentId> home = std::nullopt) {
        cfg.agents.push_back({AgentId{id}, r, std::move(home)});
    };
    switch (kind) {
        case PlatformKind::centralised:
            add("s", Role::server);
            add("p", Role::client);
            add("q", Role::client);
            break;
        case PlatformKind::federated:
            add("r", Role::server);
            add("s", Role::server);
            add("p", Role::client, AgentId{"r"});
            add("q", Role::client, AgentId{"s"});
            break;
        case PlatformKind::grassroots:
            add("p", Role::peer);
            add("q", Role::peer);
            break;
        case PlatformKind::bitcoin:
        case PlatformKind::decentralised:
            add("b", Role::bootstrap);
            add("p", Role::peer);
            add("q", Role::peer);
            cfg.bootstrap = make_agent_set({"b"});
            break;
    }
    return cfg;
}

}  // namespace mats
