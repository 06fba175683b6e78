#include "context.hpp"

namespace mats {

namespace {

bool differs_on_shared_key(const FeedState& a, const FeedState& b) {
    for (const auto& [key, posts] : a.feeds)
        if (const PostSeq* other = b.find(key); other && other->size() != posts.size()) return true;
    return false;
}

}  // namespace

Schemas grassroots_schemas(const ContextPtr& ctx) {
    Schemas out;
    auto singles = [](const Config& c) {
        std::vector<std::vector<AgentId>> t;
        for (const auto& p : c.agents()) t.push_back({p});
        return t;
    };

    out.push_back(Schema{
        .name = "Initialise",
        .arity = 1,
        .candidates = singles,
        .params = {},
        .guard = [](const Config& c, std::span<const AgentId> t,
                    const Params&) { return feeds_of(c.at(t[0])).empty(); },
        .effect =
            [](const Config&, std::span<const AgentId> t, const Params&) {
                FeedState s;
                s.feeds.emplace(plain_key(t[0]), PostSeq{});
                return std::vector<LocalState>{s};
            },
        .exact_guard = true,
    });

    out.push_back(Schema{
        .name = "Post",
        .arity = 1,
        .candidates = singles,
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

    // Follow(q) requires p to be initialised as well as p ≠ q and (q,·) ∉ c_p.
    out.push_back(Schema{
        .name = "Follow",
        .arity = 1,
        .candidates = singles,
        .params =
            [](const Config& c, std::span<const AgentId> t) {
                std::vector<Params> ps;
                for (const auto& q : c.agents())
                    if (q != t[0]) ps.push_back(Params{{"target", q.str()}});
                return ps;
            },
        .guard =
            [](const Config& c, std::span<const AgentId> t, const Params& p) {
                const AgentId target{param(p, "target")};
                const auto& s = feeds_of(c.at(t[0]));
                return target != t[0] && s.has(plain_key(t[0])) && !s.has(plain_key(target));
            },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params& p) {
                FeedState s = feeds_of(c.at(t[0]));
                s.feeds.emplace(plain_key(AgentId{param(p, "target")}), PostSeq{});
                return std::vector<LocalState>{s};
            },
        .exact_guard = true,
    });

    // Sync over {p, q}: on every shared key both sides end with the longer copy.
    out.push_back(Schema{
        .name = std::string(kSync),
        .arity = 2,
        .candidates =
            [](const Config& c) {
                std::vector<std::vector<AgentId>> t;
                const auto& ids = c.agents();
                for (std::size_t i = 0; i < ids.size(); ++i)
                    for (std::size_t j = i + 1; j < ids.size(); ++j) t.push_back({ids[i], ids[j]});
                return t;
            },
        .params = {},
        .guard =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                return differs_on_shared_key(feeds_of(c.at(t[0])), feeds_of(c.at(t[1])));
            },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                FeedState a = feeds_of(c.at(t[0]));
                FeedState b = feeds_of(c.at(t[1]));
                for (auto& [key, posts] : a.feeds) {
                    auto it = b.feeds.find(key);
                    if (it == b.feeds.end()) continue;
                    const PostSeq merged = longer_copy(posts, it->second, key);
                    posts = merged;
                    it->second = merged;
                }
                return std::vector<LocalState>{a, b};
            },
        .exact_guard = true,
    });

    return out;
}

}  // namespace mats
