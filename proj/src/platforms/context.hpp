#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mats/platforms/platform.hpp"

namespace mats {

struct PlatformContext {
    PlatformKind kind = PlatformKind::grassroots;
    std::map<AgentId, Role> roles;
    std::map<AgentId, AgentId> homes;
    AgentSet bootstrap;
    std::vector<std::string> alphabet;
    bool unique_posts = true;

    bool is(const AgentId& id, Role r) const {
        auto it = roles.find(id);
        return it != roles.end() && it->second == r;
    }

    std::vector<AgentId> agents_with(const Config& c, Role r) const {
        std::vector<AgentId> out;
        for (const auto& id : c.agents())
            if (is(id, r)) out.push_back(id);
        return out;
    }

    /// Post parameters for an agent that has already made `own_count` posts.
    std::vector<Params> post_params(std::size_t own_count) const {
        std::vector<Params> out;
        for (const auto& text : alphabet) {
            std::string value = unique_posts ? text + "#" + std::to_string(own_count + 1) : text;
            out.push_back(Params{{"m", value}});
        }
        return out;
    }
};

using ContextPtr = std::shared_ptr<const PlatformContext>;

Schemas centralised_schemas(const ContextPtr& ctx);
Schemas bitcoin_schemas(const ContextPtr& ctx);
Schemas decentralised_schemas(const ContextPtr& ctx);
Schemas federated_schemas(const ContextPtr& ctx);
Schemas grassroots_schemas(const ContextPtr& ctx);

bool is_prefix(const PostSeq& a, const PostSeq& b);
/// The longer of two prefix-related copies of one feed; anything else is a
/// protocol violation.
const PostSeq& longer_copy(const PostSeq& a, const PostSeq& b, const FeedKey& key);

inline const std::string& param(const Params& p, std::string_view key) {
    if (const std::string* v = find_param(p, key)) return *v;
    throw KernelError("missing transaction parameter '" + std::string(key) + "'");
}

}  // namespace mats
