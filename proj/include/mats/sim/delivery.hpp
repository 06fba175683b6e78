#pragma once

#include <vector>

#include "mats/kernel/reach.hpp"
#include "mats/platforms/platform.hpp"

namespace mats {

/// Number of `poster`'s posts visible to `follower` in c: the longest copy of a
/// poster-owned feed it holds, or the poster's posts on its chain.
std::size_t delivered_count(const Platform& platform, const Config& c, const AgentId& poster,
                            const AgentId& follower);

struct DeliveryPath {
    ReachVerdict initial_verdict = ReachVerdict::not_found;
    ReachVerdict subsequent_verdict = ReachVerdict::not_found;
    std::vector<Tx> initial;     // c0 -> first post delivered
    std::vector<Tx> subsequent;  // then -> second post delivered

    bool found() const {
        return initial_verdict == ReachVerdict::found && subsequent_verdict == ReachVerdict::found;
    }
};

/// Shortest transaction sequences delivering the poster's first post to the
/// follower, and then a second one.
DeliveryPath minimal_delivery_path(const Platform& platform, const AgentId& poster,
                                   const AgentId& follower, std::size_t depth = 12,
                                   std::size_t node_budget = default_node_budget());

/// The smallest universe exhibiting delivery from "p" to "q". Federated puts
/// them on distinct home servers "r" and "s"; chain platforms add bootstrap "b".
PlatformConfig delivery_universe(PlatformKind kind);

}  // namespace mats
