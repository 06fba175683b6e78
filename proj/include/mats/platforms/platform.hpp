#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mats/platforms/local_state.hpp"

namespace mats {

enum class PlatformKind { centralised, bitcoin, decentralised, federated, grassroots };
enum class Role { server, bootstrap, client, peer };

std::string_view to_string(PlatformKind k);
std::string_view to_string(Role r);
std::optional<PlatformKind> parse_platform_kind(std::string_view s);
std::optional<Role> parse_role(std::string_view s);

/// Invalid platform / run configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AgentDecl {
    AgentId id;
    Role role = Role::peer;
    std::optional<AgentId> home;  // federated clients only: restricts Register to this server
};

struct PlatformConfig {
    PlatformKind kind = PlatformKind::grassroots;
    std::vector<AgentDecl> agents;
    AgentSet bootstrap;                     // B; may name agents outside `agents` in restricted protocols
    std::vector<std::string> alphabet{"m"};
    bool unique_posts = true;               // suffix posts with a per-agent counter

    /// Role consistency for a full universe: exactly one server (centralised),
    /// nonempty B (bitcoin/decentralised), at least one server (federated).
    void validate() const;
};

/// Default universes used by the CLI and the acceptance suite.
/// `others` counts users / peers / clients / agents depending on the platform.
PlatformConfig make_universe(PlatformKind kind, std::size_t others, std::size_t servers = 1,
                             std::size_t bootstrap = 2);

struct PlatformContext;

/// A platform protocol instantiated over an agent set P: its schemas, initial
/// state, local-states function and the social-network views the simulator
/// and checkers need.
class Platform {
public:
    explicit Platform(PlatformConfig cfg);

    PlatformKind kind() const noexcept;
    const PlatformConfig& config() const noexcept { return config_; }
    const AgentSet& agents() const noexcept { return agents_; }
    Role role(const AgentId& id) const;
    AgentSet with_role(Role r) const;
    const AgentSet& bootstrap() const noexcept { return config_.bootstrap; }
    std::optional<AgentId> home(const AgentId& id) const;

    const Schemas& schemas() const noexcept { return schemas_; }
    LocalState initial_state() const;
    Config initial_configuration() const;
    const StatesPredicate& states() const noexcept { return states_; }

    /// F(P) for P a nonempty subset of this platform's agents. Roles, homes and
    /// B are inherited unchanged.
    Platform restrict(const AgentSet& subset) const;

    bool has_follow() const noexcept;
    bool uses_feeds() const noexcept;
    /// Agents that own a feed and may post (servers never do).
    bool is_initialised(const Config& c, const AgentId& p) const;
    std::optional<FeedKey> own_key(const Config& c, const AgentId& p) const;
    /// Keys p may follow in c (followed or not).
    std::vector<FeedKey> follow_targets(const Config& c, const AgentId& p) const;
    /// Whether a Sync instance is covered by this platform's fairness requirement.
    bool fairness_rule(const Config& c, const Tx& sync) const;
    /// Number of fairness-driven Sync hops bounding delivery latency (0: no Follow).
    std::size_t delivery_hops() const noexcept;
    /// The owner's authoritative sequence for a feed key (Λ when absent).
    PostSeq owner_sequence(const Config& c, const FeedKey& key) const;

private:
    PlatformConfig config_;
    AgentSet agents_;
    std::shared_ptr<const PlatformContext> context_;
    Schemas schemas_;
    StatesPredicate states_;
};

inline constexpr std::string_view kSync = "Sync";

}  // namespace mats
