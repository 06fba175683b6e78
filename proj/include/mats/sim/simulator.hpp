#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mats/platforms/platform.hpp"
#include "mats/sim/rng.hpp"

namespace mats {

struct Policy {
    std::uint64_t seed = 1;
    std::size_t max_steps = 200;
    std::size_t window = 10;  // W
    // Relative weights of schema families when no obligation is due.
    double rate_post = 0.1;
    double rate_follow = 0.2;
    double rate_join = 0.3;  // Initialise / Register
    double p_block = 0.05;
    double p_sync = 0.5;
    // Chain platforms: a non-bootstrap agent mines only after its first Sync
    // (it has joined once p is in peers_p).
    bool join_before_mining = true;

    void validate() const;
    double weight_of(std::string_view schema) const;
};

/// A fairness requirement instance: the platform's rule holds for this Sync
/// tuple. `enabled` says whether a Sync over it can currently fire; `since`
/// is the configuration index from which it has been continuously enabled.
struct Obligation {
    std::string kind{"Sync"};
    std::vector<AgentId> participants;
    bool enabled = false;
    std::size_t since = 0;

    friend bool operator==(const Obligation&, const Obligation&) = default;
};

std::vector<Obligation> fairness_obligations(const Platform& platform, const Config& c);

/// Carries `since` across steps for the obligations that stay enabled, and
/// resets it when the obligated Sync is taken.
class ObligationTracker {
public:
    explicit ObligationTracker(const Platform& platform) : platform_(&platform) {}

    /// Obligations at configuration index k. Call once per configuration, in order.
    const std::vector<Obligation>& observe(const Config& c, std::size_t k);
    /// Record transition k (from configuration k to k + 1).
    void taken(const Tx& t, std::size_t k);

    const std::vector<Obligation>& current() const noexcept { return current_; }

private:
    const Platform* platform_;
    std::vector<Obligation> current_;
    std::vector<std::pair<std::vector<AgentId>, std::size_t>> served_;  // tuple, transition index
};

struct TraceStep {
    std::size_t index = 0;
    Tx tx;
    AgentSet active;
    std::uint64_t digest = 0;  // of the configuration after the step
};

struct Trace {
    PlatformConfig platform;
    Policy policy;
    std::vector<TraceStep> steps;
    std::vector<Config> configs;  // configs[0] = c0, configs[i + 1] after steps[i]
    bool quiescent = false;

    const Config& final_configuration() const { return configs.back(); }
};

/// Picks the next transaction at configuration index k, or nullopt when the
/// run is quiescent. An obligation is served as soon as waiting longer could
/// make some obligation miss its deadline (earliest deadline first).
std::optional<Tx> schedule_step(const Platform& platform, const Config& c, std::size_t k,
                                const std::vector<Obligation>& obligations, const Policy& policy,
                                Rng& rng);

Trace run_simulation(const PlatformConfig& config, const Policy& policy);

/// Builds a trace by applying the given instances from c0 (used by tests and replay).
Trace make_trace(const PlatformConfig& config, const Policy& policy, const std::vector<Tx>& steps);

struct FairnessVerdict {
    bool fair = true;
    std::size_t window = 0;
    std::optional<std::size_t> violation_at;  // configuration index
    std::vector<AgentId> participants;
    std::size_t max_wait = 0;  // longest observed continuous enablement before service
};

FairnessVerdict check_fairness(const Trace& trace, std::size_t window);

}  // namespace mats
