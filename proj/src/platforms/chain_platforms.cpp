#include "context.hpp"

namespace mats {

namespace {

std::vector<std::vector<AgentId>> singles(const Config& c) {
    std::vector<std::vector<AgentId>> t;
    for (const auto& p : c.agents()) t.push_back({p});
    return t;
}

std::vector<std::vector<AgentId>> ordered_pairs(const Config& c) {
    std::vector<std::vector<AgentId>> t;
    for (const auto& p : c.agents())
        for (const auto& q : c.agents())
            if (p != q) t.push_back({p, q});
    return t;
}

std::vector<PublishedPost> unpublished(const ChainState& s, const AgentId& p) {
    std::vector<PublishedPost> out;
    for (std::size_t i = s.pointer; i < s.posts.size(); ++i) out.push_back({p, s.posts[i]});
    return out;
}

// Sync over {p, q} with p pulling from q: q ∈ peers_p and |chain_p| < |chain_q|.
bool sync_guard(const Config& c, std::span<const AgentId> t, const Params&) {
    const auto& p = chain_of(c.at(t[0]));
    const auto& q = chain_of(c.at(t[1]));
    return contains(p.peers, t[1]) && p.chain.length() < q.chain.length();
}

// p adopts q's chain (content, not only its length); both peer sets become
// peers_p ∪ peers_q ∪ {p}.
std::pair<ChainState, ChainState> sync_common(const Config& c, std::span<const AgentId> t) {
    ChainState p = chain_of(c.at(t[0]));
    ChainState q = chain_of(c.at(t[1]));
    AgentSet peers = p.peers;
    peers.insert(peers.end(), q.peers.begin(), q.peers.end());
    peers.push_back(t[0]);
    normalise(peers);
    p.chain = q.chain;
    p.peers = peers;
    q.peers = peers;
    return {std::move(p), std::move(q)};
}

Params block_param(const Chain& chain, const AgentId& producer, const std::vector<PublishedPost>& payload) {
    return Params{{"block", to_hex(block_identity(chain.tip_id(), producer, payload))}};
}

}  // namespace

Schemas bitcoin_schemas(const ContextPtr&) {
    Schemas out;

    // AddBlock(b) over {p}: chain_p ≠ Λ. No proof-of-work precondition.
    out.push_back(Schema{
        .name = "AddBlock",
        .arity = 1,
        .candidates = singles,
        .params =
            [](const Config& c, std::span<const AgentId> t) {
                return std::vector<Params>{block_param(chain_of(c.at(t[0])).chain, t[0], {})};
            },
        .guard = [](const Config& c, std::span<const AgentId> t,
                    const Params&) { return !chain_of(c.at(t[0])).chain.empty(); },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                ChainState s = chain_of(c.at(t[0]));
                s.chain = s.chain.append(t[0], {});
                return std::vector<LocalState>{s};
            },
        .exact_guard = true,
    });

    out.push_back(Schema{
        .name = std::string(kSync),
        .arity = 2,
        .candidates = ordered_pairs,
        .params = {},
        .guard = sync_guard,
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                auto [p, q] = sync_common(c, t);
                return std::vector<LocalState>{p, q};
            },
        .exact_guard = true,
    });
    return out;
}

Schemas decentralised_schemas(const ContextPtr& ctx) {
    Schemas out;

    out.push_back(Schema{
        .name = "Post",
        .arity = 1,
        .candidates = singles,
        .params = [ctx](const Config& c,
                        std::span<const AgentId> t) { return ctx->post_params(chain_of(c.at(t[0])).posts.size()); },
        .guard = [](const Config&, std::span<const AgentId>, const Params&) { return true; },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params& p) {
                ChainState s = chain_of(c.at(t[0]));
                s.posts.push_back(param(p, "m"));
                return std::vector<LocalState>{s};
            },
        .exact_guard = true,
    });

    // AddBlock over {p}: the block carries posts[pointer..|posts|], which must be
    // nonempty; pointer advances to |posts|.
    out.push_back(Schema{
        .name = "AddBlock",
        .arity = 1,
        .candidates = singles,
        .params =
            [](const Config& c, std::span<const AgentId> t) {
                const auto& s = chain_of(c.at(t[0]));
                return std::vector<Params>{block_param(s.chain, t[0], unpublished(s, t[0]))};
            },
        .guard =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                const auto& s = chain_of(c.at(t[0]));
                return !s.chain.empty() && s.pointer < s.posts.size();
            },
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                ChainState s = chain_of(c.at(t[0]));
                s.chain = s.chain.append(t[0], unpublished(s, t[0]));
                s.pointer = s.posts.size();
                return std::vector<LocalState>{s};
            },
        .exact_guard = true,
    });

    // Sync as in the substrate; pointer_p becomes the number of p's posts the
    // adopted chain already carries, so nothing is published twice.
    out.push_back(Schema{
        .name = std::string(kSync),
        .arity = 2,
        .candidates = ordered_pairs,
        .params = {},
        .guard = sync_guard,
        .effect =
            [](const Config& c, std::span<const AgentId> t, const Params&) {
                auto [p, q] = sync_common(c, t);
                p.pointer = p.chain.count_posts_by(t[0], p.chain.length());
                return std::vector<LocalState>{p, q};
            },
        .exact_guard = true,
    });
    return out;
}

}  // namespace mats
