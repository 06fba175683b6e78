#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mats/sim/rng.hpp"
#include "mats/sim/simulator.hpp"

namespace mats {

struct SafetyVerdict {
    bool holds = true;
    std::optional<std::size_t> config_index;  // first violating configuration
    std::string detail;
};

/// Every copy of a feed held by a non-owner is a prefix of the owner's own
/// sequence; on chain platforms, each agent's chain carries a prefix of every
/// author's posts.
SafetyVerdict check_follower_safety(const Trace& trace);
SafetyVerdict check_follower_safety(const Platform& platform, const Config& c);

/// Corrupts one held copy (or chain) in configuration `index`, the way a
/// faulty replica would. Returns false if there is nothing to corrupt.
bool inject_safety_violation(Trace& trace, std::size_t index, Rng& rng);

struct PostDelivery {
    AgentId poster;
    AgentId follower;
    std::size_t position = 0;   // index of the post in the poster's feed
    std::size_t posted_at = 0;  // configuration index where the post exists
    std::size_t due_from = 0;   // later of posted_at and the follow
    std::optional<std::size_t> delivered_at;
};

struct LivenessVerdict {
    enum class Status { holds, violated, pending, inapplicable };
    Status status = Status::holds;
    std::size_t window = 0;
    std::size_t exemption = 0;  // trailing configurations in which delivery may be pending
    std::size_t delivered = 0;
    std::size_t max_latency = 0;
    std::vector<PostDelivery> pending;
    std::vector<PostDelivery> undelivered;
    std::string note;
};
const char* to_string(LivenessVerdict::Status s);

/// Delivery of every post to every follower of its author. Requires a
/// window-fair trace; posts due within the last hops*W configurations may be
/// pending.
LivenessVerdict check_liveness(const Trace& trace, std::size_t window);

struct AutonomyVerdict {
    bool holds = true;
    bool follow_checked = true;
    std::optional<std::size_t> config_index;
    std::string detail;
};

/// Every initialised agent can Post, and can Follow every agent it does not yet follow.
AutonomyVerdict check_autonomy(const Trace& trace);

nlohmann::ordered_json to_json(const SafetyVerdict& v);
nlohmann::ordered_json to_json(const LivenessVerdict& v);
nlohmann::ordered_json to_json(const AutonomyVerdict& v);
nlohmann::ordered_json to_json(const FairnessVerdict& v);

}  // namespace mats
