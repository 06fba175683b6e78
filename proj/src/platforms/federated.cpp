#include "context.hpp"

namespace mats {

namespace {

std::optional<FeedKey> registered_key(const FeedState& s, const AgentId& client) {
    for (const auto& [key, posts] : s.feeds)
        if (key.agent == client && key.qualified()) return key;
    return std::nullopt;
}

bool homed_at(const FeedKey& k, const AgentId& a, const AgentId& b) {
    return k.server == a || k.server == b;
}

// Some feed homed at one of the two servers is held by both, in different versions.
bool servers_differ_on_home_key(const FeedState& a, const FeedState& b, const AgentId& sa,
                                const AgentId& sb) {
    for (const auto& [key, posts] : a.feeds) {
        if (!homed_at(key, sa, sb)) continue;
        if (const PostSeq* other = b.find(key); other && *other != posts) return true;
    }
    return false;
}

// Client a syncing with its server b would change one of them.
bool client_sync_changes(const FeedState& a, const FeedState& b, const AgentId& client, const AgentId& server) {
    const FeedKey own = qualified_key(client, server);
    const PostSeq* held = b.find(own);
    if (!held) return false;
    if (const PostSeq* mine = a.find(own); mine && !is_prefix(*mine, *held)) return true;
    for (const auto& [key, copy] : a.feeds) {
        if (key.agent == client) continue;
        const PostSeq* theirs = b.find(key);
        if (!theirs || !is_prefix(*theirs, copy)) return true;
    }
    return false;
}

}  // namespace

Schemas federated_schemas(const ContextPtr& ctx) {
    Schemas out;
    auto clients = [ctx](const Config& c) {
        std::vector<std::vector<AgentId>> t;
        for (const auto& p : ctx->agents_with(c, Role::client)) t.push_back({p});
        return t;
    };
    auto allowed_server = [ctx](const AgentId& client, const AgentId& server) {
        auto it = ctx->homes.find(client);
        return it == ctx->homes.end() || it->second == server;
    };

    // Register over {client p, server s}: c_p = ∅; both gain (p@s, Λ).
    out.push_back(Schema{
        .name = "Register",
        .arity = 2,
        .candidates =
            [ctx, allowed_server](const Config& c) {
                std::vector<std::vector<AgentId>> t;
                for (const auto& p : ctx->agents_with(c, Role::client))
                    for (const auto& s : ctx->agents_with(c, Role::server))
                        if (allowed_server(p, s)) t.push_back({p, s});
                return t;
            },
        .params = {},
        .guard = [](const Config& c, std::span<const AgentId> t,
                    const Params&) { return feeds_of(c.at(t[0])).empty(); },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                const FeedKey key = qualified_key(t[0], t[1]);
                FeedState client;
                client.feeds.emplace(key, PostSeq{});
                FeedState server = feeds_of(c.at(t[1]));
                server.feeds.try_emplace(key);
                return std::vector<LocalState>{client, server};
            },
        .exact_guard = true,
    });

    out.push_back(Schema{
        .name = "Post",
        .arity = 1,
        .candidates = clients,
        .params =
            [ctx](const Config& c, std::span<const AgentId> t) {
                const auto& s = feeds_of(c.at(t[0]));
                auto key = registered_key(s, t[0]);
                return ctx->post_params(key ? s.find(*key)->size() : 0);
            },
        .guard = [](const Config& c, std::span<const AgentId> t,
                    const Params&) { return registered_key(feeds_of(c.at(t[0])), t[0]).has_value(); },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params& p) {
                FeedState s = feeds_of(c.at(t[0]));
                s.feeds[*registered_key(s, t[0])].push_back(param(p, "m"));
                return std::vector<LocalState>{s};
            },
        .exact_guard = true,
    });

    // Follow(q@s') over {p}: targets are other clients at servers they may register with.
    out.push_back(Schema{
        .name = "Follow",
        .arity = 1,
        .candidates = clients,
        .params =
            [ctx, allowed_server](const Config& c, std::span<const AgentId> t) {
                std::vector<Params> ps;
                for (const auto& q : ctx->agents_with(c, Role::client)) {
                    if (q == t[0]) continue;
                    for (const auto& s : ctx->agents_with(c, Role::server))
                        if (allowed_server(q, s))
                            ps.push_back(Params{{"server", s.str()}, {"target", q.str()}});
                }
                return ps;
            },
        .guard =
            [](const Config& c, std::span<const AgentId> t, const Params& p) {
                const auto& s = feeds_of(c.at(t[0]));
                const FeedKey key = qualified_key(AgentId{param(p, "target")}, AgentId{param(p, "server")});
                return !s.empty() && !s.has(key);
            },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params& p) {
                FeedState s = feeds_of(c.at(t[0]));
                s.feeds.emplace(qualified_key(AgentId{param(p, "target")}, AgentId{param(p, "server")}),
                                PostSeq{});
                return std::vector<LocalState>{s};
            },
        .exact_guard = true,
    });

    // Sync over {client a, home server b} or over two distinct servers.
    out.push_back(Schema{
        .name = std::string(kSync),
        .arity = 2,
        .candidates =
            [ctx](const Config& c) {
                std::vector<std::vector<AgentId>> t;
                const auto servers = ctx->agents_with(c, Role::server);
                for (const auto& a : ctx->agents_with(c, Role::client))
                    for (const auto& b : servers) t.push_back({a, b});
                for (std::size_t i = 0; i < servers.size(); ++i)
                    for (std::size_t j = i + 1; j < servers.size(); ++j)
                        t.push_back({servers[i], servers[j]});
                return t;
            },
        .params = {},
        .guard =
            [ctx](const Config& c, std::span<const AgentId> t, const Params&) {
                const auto& a = feeds_of(c.at(t[0]));
                const auto& b = feeds_of(c.at(t[1]));
                if (ctx->is(t[0], Role::client)) return client_sync_changes(a, b, t[0], t[1]);
                return servers_differ_on_home_key(a, b, t[0], t[1]);
            },
        .effect =
            [ctx](const Config& c, std::span<const AgentId> t, const Params&) {
                FeedState a = feeds_of(c.at(t[0]));
                FeedState b = feeds_of(c.at(t[1]));
                if (ctx->is(t[0], Role::client)) {
                    const FeedKey own = qualified_key(t[0], t[1]);
                    if (const PostSeq* mine = a.find(own))
                        b.feeds[own] = longer_copy(b.feeds[own], *mine, own);
                    for (auto& [key, copy] : a.feeds) {
                        if (key.agent == t[0]) continue;
                        // The home server learns what its client follows so that
                        // federation can fetch it.
                        auto [it, inserted] = b.feeds.try_emplace(key);
                        if (!inserted) copy = longer_copy(copy, it->second, key);
                    }
                } else {
                    for (auto& [key, posts] : a.feeds) {
                        if (!homed_at(key, t[0], t[1])) continue;
                        auto it = b.feeds.find(key);
                        if (it == b.feeds.end()) continue;
                        const PostSeq merged = longer_copy(posts, it->second, key);
                        posts = merged;
                        it->second = merged;
                    }
                }
                return std::vector<LocalState>{a, b};
            },
        .exact_guard = true,
    });

    return out;
}

}  // namespace mats
