#include "context.hpp"

namespace mats {

Schemas centralised_schemas(const ContextPtr& ctx) {
    Schemas out;

    // Register over {server s, user q}: c_q = ∅; q gets (q,Λ), s adds (q,Λ).
    out.push_back(Schema{
        .name = "Register",
        .arity = 2,
        .candidates =
            [ctx](const Config& c) {
                std::vector<std::vector<AgentId>> t;
                for (const auto& s : ctx->agents_with(c, Role::server))
                    for (const auto& q : ctx->agents_with(c, Role::client)) t.push_back({s, q});
                return t;
            },
        .params = {},
        .guard = [](const Config& c, std::span<const AgentId> t,
                    const Params&) { return feeds_of(c.at(t[1])).empty(); },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                FeedState server = feeds_of(c.at(t[0]));
                server.feeds.try_emplace(plain_key(t[1]));
                FeedState user;
                user.feeds.emplace(plain_key(t[1]), PostSeq{});
                return std::vector<LocalState>{server, user};
            },
        .exact_guard = true,
    });

    out.push_back(Schema{
        .name = "Post",
        .arity = 1,
        .candidates =
            [ctx](const Config& c) {
                std::vector<std::vector<AgentId>> t;
                for (const auto& q : ctx->agents_with(c, Role::client)) t.push_back({q});
                return t;
            },
        .params =
            [ctx](const Config& c, std::span<const AgentId> t) {
                const PostSeq* own = feeds_of(c.at(t[0])).find(plain_key(t[0]));
                return ctx->post_params(own ? own->size() : 0);
            },
        .guard = [](const Config& c, std::span<const AgentId> t,
                    const Params&) { return feeds_of(c.at(t[0])).has(plain_key(t[0])); },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params& p) {
                FeedState s = feeds_of(c.at(t[0]));
                s.feeds[plain_key(t[0])].push_back(param(p, "m"));
                return std::vector<LocalState>{s};
            },
        .exact_guard = true,
    });

    out.push_back(Schema{
        .name = "Follow",
        .arity = 1,
        .candidates =
            [ctx](const Config& c) {
                std::vector<std::vector<AgentId>> t;
                for (const auto& q : ctx->agents_with(c, Role::client)) t.push_back({q});
                return t;
            },
        .params =
            [ctx](const Config& c, std::span<const AgentId> t) {
                std::vector<Params> ps;
                for (const auto& other : ctx->agents_with(c, Role::client))
                    if (other != t[0]) ps.push_back(Params{{"target", other.str()}});
                return ps;
            },
        .guard =
            [](const Config& c, std::span<const AgentId> t, const Params& p) {
                const auto& s = feeds_of(c.at(t[0]));
                return !s.empty() && !s.has(plain_key(AgentId{param(p, "target")}));
            },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params& p) {
                FeedState s = feeds_of(c.at(t[0]));
                s.feeds.emplace(plain_key(AgentId{param(p, "target")}), PostSeq{});
                return std::vector<LocalState>{s};
            },
        .exact_guard = true,
    });

    // Sync over {user q, server s}: (q,·) ∈ c_s. The server's copy of q's feed
    // catches up with q; q's copies of followed feeds catch up with the server.
    out.push_back(Schema{
        .name = std::string(kSync),
        .arity = 2,
        .candidates =
            [ctx](const Config& c) {
                std::vector<std::vector<AgentId>> t;
                for (const auto& q : ctx->agents_with(c, Role::client))
                    for (const auto& s : ctx->agents_with(c, Role::server)) t.push_back({q, s});
                return t;
            },
        .params = {},
        .guard =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                const auto& user = feeds_of(c.at(t[0]));
                const auto& server = feeds_of(c.at(t[1]));
                const FeedKey own = plain_key(t[0]);
                const PostSeq* held = server.find(own);
                if (!held) return false;
                // Enabled only when some copy would catch up (or prove divergent).
                if (const PostSeq* mine = user.find(own); mine && !is_prefix(*mine, *held)) return true;
                for (const auto& [key, copy] : user.feeds) {
                    if (key == own) continue;
                    if (const PostSeq* theirs = server.find(key); theirs && !is_prefix(*theirs, copy)) return true;
                }
                return false;
            },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                FeedState user = feeds_of(c.at(t[0]));
                FeedState server = feeds_of(c.at(t[1]));
                const FeedKey own = plain_key(t[0]);
                if (const PostSeq* mine = user.find(own))
                    server.feeds[own] = longer_copy(server.feeds[own], *mine, own);
                for (auto& [key, copy] : user.feeds) {
                    if (key == own) continue;
                    if (const PostSeq* theirs = server.find(key)) copy = longer_copy(copy, *theirs, key);
                }
                return std::vector<LocalState>{user, server};
            },
        .exact_guard = true,
    });

    return out;
}

}  // namespace mats
