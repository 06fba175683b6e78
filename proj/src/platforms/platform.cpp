#include "mats/platforms/platform.hpp"

#include <algorithm>

#include "context.hpp"

namespace mats {

std::string_view to_string(PlatformKind k) {
    switch (k) {
        case PlatformKind::centralised: return "centralised";
        case PlatformKind::bitcoin: return "bitcoin";
        case PlatformKind::decentralised: return "decentralised";
        case PlatformKind::federated: return "federated";
        case PlatformKind::grassroots: return "grassroots";
    }
    return "?";
}

std::string_view to_string(Role r) {
    switch (r) {
        case Role::server: return "server";
        case Role::bootstrap: return "bootstrap";
        case Role::client: return "client";
        case Role::peer: return "peer";
    }
    return "?";
}

std::optional<PlatformKind> parse_platform_kind(std::string_view s) {
    for (auto k : {PlatformKind::centralised, PlatformKind::bitcoin, PlatformKind::decentralised,
                   PlatformKind::federated, PlatformKind::grassroots})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::optional<Role> parse_role(std::string_view s) {
    for (auto r : {Role::server, Role::bootstrap, Role::client, Role::peer})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

bool is_prefix(const PostSeq& a, const PostSeq& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

const PostSeq& longer_copy(const PostSeq& a, const PostSeq& b, const FeedKey& key) {
    if (is_prefix(a, b)) return b;
    if (is_prefix(b, a)) return a;
    throw ProtocolViolation("divergent copies of feed " + key.str());
}

namespace {

bool chain_kind(PlatformKind k) {
    return k == PlatformKind::bitcoin || k == PlatformKind::decentralised;
}

bool role_allowed(PlatformKind k, Role r) {
    switch (k) {
        case PlatformKind::centralised:
        case PlatformKind::federated: return r == Role::server || r == Role::client;
        case PlatformKind::bitcoin:
        case PlatformKind::decentralised: return r == Role::bootstrap || r == Role::peer;
        case PlatformKind::grassroots: return r == Role::peer;
    }
    return false;
}

}  // namespace

void PlatformConfig::validate() const {
    if (agents.empty()) throw ConfigError("platform needs at least one agent");
    AgentSet ids;
    std::size_t servers = 0;
    for (const auto& a : agents) {
        if (a.id.empty()) throw ConfigError("agent ids must be nonempty");
        if (a.id.str().find('@') != std::string::npos)
            throw ConfigError("agent id '" + a.id.str() + "' may not contain '@'");
        if (!role_allowed(kind, a.role))
            throw ConfigError("role '" + std::string(to_string(a.role)) + "' is not valid on a " +
                              std::string(to_string(kind)) + " platform");
        if (a.role == Role::server) ++servers;
        if (a.home && kind != PlatformKind::federated)
            throw ConfigError("home servers only apply to federated platforms");
        ids.push_back(a.id);
    }
    std::size_t n = ids.size();
    normalise(ids);
    if (ids.size() != n) throw ConfigError("duplicate agent ids");
    for (const auto& a : agents) {
        if (!a.home) continue;
        if (a.role != Role::client) throw ConfigError("only clients have a home server");
        auto it = std::find_if(agents.begin(), agents.end(), [&](const AgentDecl& d) { return d.id == *a.home; });
        if (it == agents.end() || it->role != Role::server)
            throw ConfigError("home of '" + a.id.str() + "' is not a server");
    }
    if (alphabet.empty()) throw ConfigError("message alphabet must be nonempty");

    switch (kind) {
        case PlatformKind::centralised:
            if (servers != 1) throw ConfigError("centralised platform needs exactly one server");
            break;
        case PlatformKind::federated:
            if (servers < 1) throw ConfigError("federated platform needs at least one server");
            break;
        case PlatformKind::bitcoin:
        case PlatformKind::decentralised:
            if (bootstrap.empty())
                throw ConfigError(std::string(to_string(kind)) + " platform needs a nonempty bootstrap set");
            for (const auto& b : bootstrap)
                if (!contains(ids, b)) throw ConfigError("bootstrap agent '" + b.str() + "' is not declared");
            break;
        case PlatformKind::grassroots: break;
    }
}

PlatformConfig make_universe(PlatformKind kind, std::size_t others, std::size_t servers,
                             std::size_t bootstrap) {
    PlatformConfig cfg;
    cfg.kind = kind;
    auto add = [&](std::string name, Role r) { cfg.agents.push_back({AgentId{std::move(name)}, r, {}}); };
    switch (kind) {
        case PlatformKind::centralised:
            add("s", Role::server);
            for (std::size_t i = 1; i <= others; ++i) add("u" + std::to_string(i), Role::client);
            break;
        case PlatformKind::federated:
            for (std::size_t i = 1; i <= servers; ++i) add("s" + std::to_string(i), Role::server);
            for (std::size_t i = 1; i <= others; ++i) add("c" + std::to_string(i), Role::client);
            break;
        case PlatformKind::bitcoin:
        case PlatformKind::decentralised:
            for (std::size_t i = 1; i <= bootstrap; ++i) {
                add("b" + std::to_string(i), Role::bootstrap);
                cfg.bootstrap.push_back(cfg.agents.back().id);
            }
            for (std::size_t i = 1; i <= others; ++i) add("p" + std::to_string(i), Role::peer);
            break;
        case PlatformKind::grassroots:
            for (std::size_t i = 1; i <= others; ++i) add("a" + std::to_string(i), Role::peer);
            break;
    }
    normalise(cfg.bootstrap);
    return cfg;
}

Platform::Platform(PlatformConfig cfg) : config_(std::move(cfg)) {
    // Bootstrap roles and the explicit B list describe the same set.
    for (const auto& a : config_.agents)
        if (a.role == Role::bootstrap) config_.bootstrap.push_back(a.id);
    normalise(config_.bootstrap);
    if (config_.agents.empty()) throw ConfigError("platform needs at least one agent");

    auto ctx = std::make_shared<PlatformContext>();
    ctx->kind = config_.kind;
    ctx->bootstrap = config_.bootstrap;
    ctx->alphabet = config_.alphabet;
    ctx->unique_posts = config_.unique_posts;
    for (const auto& a : config_.agents) {
        agents_.push_back(a.id);
        ctx->roles[a.id] = a.role;
        if (a.home) ctx->homes[a.id] = *a.home;
    }
    normalise(agents_);
    if (agents_.size() != config_.agents.size()) throw ConfigError("duplicate agent ids");
    context_ = ctx;

    switch (config_.kind) {
        case PlatformKind::centralised: schemas_ = centralised_schemas(context_); break;
        case PlatformKind::bitcoin: schemas_ = bitcoin_schemas(context_); break;
        case PlatformKind::decentralised: schemas_ = decentralised_schemas(context_); break;
        case PlatformKind::federated: schemas_ = federated_schemas(context_); break;
        case PlatformKind::grassroots: schemas_ = grassroots_schemas(context_); break;
    }
    std::sort(schemas_.begin(), schemas_.end(), [](const Schema& a, const Schema& b) { return a.name < b.name; });

    const AgentSet admitted = chain_kind(config_.kind) ? config_.bootstrap : AgentSet{};
    states_.initial = initial_state();
    states_.contains = [admitted](const LocalState& s, const AgentSet& p) {
        for (const auto& id : mentioned_agents(s))
            if (!contains(p, id) && !contains(admitted, id)) return false;
        return true;
    };
}

PlatformKind Platform::kind() const noexcept { return config_.kind; }

Role Platform::role(const AgentId& id) const {
    auto it = context_->roles.find(id);
    if (it == context_->roles.end()) throw KernelError("unknown agent '" + id.str() + "'");
    return it->second;
}

AgentSet Platform::with_role(Role r) const {
    AgentSet out;
    for (const auto& id : agents_)
        if (context_->is(id, r)) out.push_back(id);
    return out;
}

std::optional<AgentId> Platform::home(const AgentId& id) const {
    auto it = context_->homes.find(id);
    if (it == context_->homes.end()) return std::nullopt;
    return it->second;
}

LocalState Platform::initial_state() const {
    if (chain_kind(config_.kind)) return ChainState{Chain::genesis(), config_.bootstrap, {}, 0};
    return FeedState{};
}

Config Platform::initial_configuration() const { return Config(agents_, initial_state()); }

Platform Platform::restrict(const AgentSet& subset) const {
    AgentSet sub = subset;
    normalise(sub);
    if (sub.empty()) throw KernelError("cannot restrict a protocol to an empty agent set");
    if (!is_subset(sub, agents_)) throw KernelError("restriction set is not a subset of the platform's agents");
    PlatformConfig cfg = config_;
    cfg.agents.clear();
    for (const auto& a : config_.agents)
        if (contains(sub, a.id)) cfg.agents.push_back(a);
    return Platform(std::move(cfg));
}

bool Platform::has_follow() const noexcept { return uses_feeds(); }

bool Platform::uses_feeds() const noexcept { return !chain_kind(config_.kind); }

std::optional<FeedKey> Platform::own_key(const Config& c, const AgentId& p) const {
    if (!uses_feeds()) return std::nullopt;
    const auto& s = feeds_of(c.at(p));
    switch (config_.kind) {
        case PlatformKind::federated:
            for (const auto& [key, posts] : s.feeds)
                if (key.agent == p && key.qualified()) return key;
            return std::nullopt;
        default:
            if (s.has(plain_key(p))) return plain_key(p);
            return std::nullopt;
    }
}

bool Platform::is_initialised(const Config& c, const AgentId& p) const {
    if (!uses_feeds()) return true;
    if (context_->is(p, Role::server)) return false;
    return own_key(c, p).has_value();
}

std::vector<FeedKey> Platform::follow_targets(const Config& c, const AgentId& p) const {
    std::vector<FeedKey> out;
    switch (config_.kind) {
        case PlatformKind::centralised:
            for (const auto& q : context_->agents_with(c, Role::client))
                if (q != p) out.push_back(plain_key(q));
            break;
        case PlatformKind::grassroots:
            for (const auto& q : c.agents())
                if (q != p) out.push_back(plain_key(q));
            break;
        case PlatformKind::federated:
            for (const auto& q : context_->agents_with(c, Role::client)) {
                if (q == p) continue;
                for (const auto& s : context_->agents_with(c, Role::server)) {
                    auto h = context_->homes.find(q);
                    if (h == context_->homes.end() || h->second == s) out.push_back(qualified_key(q, s));
                }
            }
            break;
        default: break;
    }
    return out;
}

bool Platform::fairness_rule(const Config& c, const Tx& sync) const {
    if (sync.schema != kSync || sync.participants.size() != 2) return false;
    const AgentId& a = sync.participants[0];
    const AgentId& b = sync.participants[1];
    switch (config_.kind) {
        case PlatformKind::centralised: return feeds_of(c.at(b)).has(plain_key(a));
        case PlatformKind::bitcoin:
        case PlatformKind::decentralised: return contains(chain_of(c.at(a)).peers, b);
        case PlatformKind::grassroots:
            return feeds_of(c.at(a)).has(plain_key(b)) || feeds_of(c.at(b)).has(plain_key(a));
        case PlatformKind::federated: {
            if (context_->is(a, Role::client)) return feeds_of(c.at(b)).has(qualified_key(a, b));
            for (const auto& [key, posts] : feeds_of(c.at(b)).feeds)
                if (key.server == a) return true;
            for (const auto& [key, posts] : feeds_of(c.at(a)).feeds)
                if (key.server == b) return true;
            return false;
        }
    }
    return false;
}

std::size_t Platform::delivery_hops() const noexcept {
    switch (config_.kind) {
        case PlatformKind::grassroots: return 1;
        case PlatformKind::centralised: return 2;
        case PlatformKind::federated: return 3;
        default: return 0;
    }
}

PostSeq Platform::owner_sequence(const Config& c, const FeedKey& key) const {
    if (!c.has(key.agent)) return {};
    if (const PostSeq* own = feeds_of(c.at(key.agent)).find(key)) return *own;
    return {};
}

}  // namespace mats
