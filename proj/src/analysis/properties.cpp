#include "mats/analysis/properties.hpp"

#include <algorithm>
#include <set>

namespace mats {

namespace {

bool prefix_of(const PostSeq& a, const PostSeq& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

FeedKey key_from_params(const Params& p) {
    AgentId target{*find_param(p, "target")};
    if (const std::string* s = find_param(p, "server")) return qualified_key(target, AgentId{*s});
    return plain_key(target);
}

}  // namespace

SafetyVerdict check_follower_safety(const Platform& platform, const Config& c) {
    SafetyVerdict v;
    if (platform.uses_feeds()) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const AgentId& holder = c.agents()[i];
            for (const auto& [key, copy] : feeds_of(c.state(i)).feeds) {
                if (key.agent == holder) continue;
                if (!prefix_of(copy, platform.owner_sequence(c, key))) {
                    v.holds = false;
                    v.detail = holder.str() + "'s copy of " + key.str() + " is not a prefix of its owner's feed";
                    return v;
                }
            }
        }
        return v;
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Chain& chain = chain_of(c.state(i)).chain;
        for (std::size_t j = 0; j < c.size(); ++j) {
            const AgentId& author = c.agents()[j];
            if (!prefix_of(chain.posts_by(author), chain_of(c.state(j)).posts)) {
                v.holds = false;
                v.detail = c.agents()[i].str() + "'s chain carries posts of " + author.str() +
                           " that are not a prefix of that author's posts";
                return v;
            }
        }
    }
    return v;
}

SafetyVerdict check_follower_safety(const Trace& trace) {
    Platform platform(trace.platform);
    for (std::size_t k = 0; k < trace.configs.size(); ++k) {
        auto v = check_follower_safety(platform, trace.configs[k]);
        if (!v.holds) {
            v.config_index = k;
            return v;
        }
    }
    return {};
}

bool inject_safety_violation(Trace& trace, std::size_t index, Rng& rng) {
    if (index >= trace.configs.size()) return false;
    Platform platform(trace.platform);
    Config& c = trace.configs[index];
    const auto& ids = c.agents();
    if (ids.size() < 2) return false;

    if (!platform.uses_feeds()) {
        const AgentId holder = ids[rng.below(ids.size())];
        const AgentId author = ids[rng.below(ids.size())];
        ChainState s = chain_of(c.at(holder));
        if (s.chain.empty()) return false;
        s.chain = s.chain.append(holder, {PublishedPost{author, "forged"}});
        c.at(holder) = s;
        return true;
    }

    std::vector<std::pair<AgentId, FeedKey>> copies;
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (const auto& [key, posts] : feeds_of(c.state(i)).feeds)
            if (key.agent != ids[i]) copies.emplace_back(ids[i], key);

    AgentId holder;
    FeedKey key;
    if (!copies.empty()) {
        std::tie(holder, key) = copies[rng.below(copies.size())];
    } else {
        holder = ids[rng.below(ids.size())];
        AgentId owner = ids[(std::find(ids.begin(), ids.end(), holder) - ids.begin() + 1) % ids.size()];
        key = plain_key(owner);
        if (platform.kind() == PlatformKind::federated) {
            auto servers = platform.with_role(Role::server);
            key = platform.own_key(c, owner).value_or(qualified_key(owner, servers.front()));
        }
    }
    PostSeq owner = platform.owner_sequence(c, key);
    PostSeq forged;
    if (owner.size() >= 2 && owner.front() != owner.back()) {
        forged.assign(owner.rbegin(), owner.rend());  // reordered copy
    } else {
        forged = owner;
        forged.push_back("forged");
    }
    FeedState s = feeds_of(c.at(holder));
    s.feeds[key] = std::move(forged);
    c.at(holder) = s;
    return true;
}

const char* to_string(LivenessVerdict::Status s) {
    switch (s) {
        case LivenessVerdict::Status::holds: return "holds";
        case LivenessVerdict::Status::violated: return "violated";
        case LivenessVerdict::Status::pending: return "pending";
        case LivenessVerdict::Status::inapplicable: return "inapplicable";
    }
    return "?";
}

LivenessVerdict check_liveness(const Trace& trace, std::size_t window) {
    LivenessVerdict out;
    out.window = window;
    Platform platform(trace.platform);
    auto fair = check_fairness(trace, window);
    if (!fair.fair) {
        out.status = LivenessVerdict::Status::inapplicable;
        out.note = "trace is not window-fair (W=" + std::to_string(window) + ")";
        return out;
    }
    if (!platform.has_follow()) {
        out.note = "no Follow transaction: nothing is owed to followers";
        return out;
    }
    out.exemption = platform.delivery_hops() * window;
    const std::size_t last = trace.configs.size() - 1;

    for (const auto& step : trace.steps) {
        if (step.tx.schema != "Post") continue;
        const AgentId& poster = step.tx.participants[0];
        const std::size_t posted_at = step.index + 1;
        const Config& after = trace.configs[posted_at];
        auto key = platform.own_key(after, poster);
        if (!key) continue;
        const std::size_t position = platform.owner_sequence(after, *key).size() - 1;

        for (const auto& f : platform.agents()) {
            if (f == poster || platform.role(f) == Role::server) continue;
            std::optional<std::size_t> due;
            for (std::size_t k = posted_at; k <= last && !due; ++k)
                if (feeds_of(trace.configs[k].at(f)).has(*key)) due = k;
            if (!due) continue;
            PostDelivery d{poster, f, position, posted_at, *due, std::nullopt};
            for (std::size_t k = *due; k <= last; ++k) {
                const PostSeq* copy = feeds_of(trace.configs[k].at(f)).find(*key);
                if (copy && copy->size() > position) {
                    d.delivered_at = k;
                    break;
                }
            }
            if (d.delivered_at) {
                ++out.delivered;
                out.max_latency = std::max(out.max_latency, *d.delivered_at - d.due_from);
            } else if (d.due_from + out.exemption > last) {
                out.pending.push_back(d);
            } else {
                out.undelivered.push_back(d);
            }
        }
    }
    if (!out.undelivered.empty())
        out.status = LivenessVerdict::Status::violated;
    else if (!out.pending.empty())
        out.status = LivenessVerdict::Status::pending;
    return out;
}

AutonomyVerdict check_autonomy(const Trace& trace) {
    AutonomyVerdict out;
    Platform platform(trace.platform);
    out.follow_checked = platform.has_follow();
    const bool has_post = std::any_of(platform.schemas().begin(), platform.schemas().end(),
                                      [](const Schema& s) { return s.name == "Post"; });
    if (!has_post) {
        out.detail = "platform defines no Post transaction";
        return out;
    }
    auto fail = [&](std::size_t k, std::string why) {
        out.holds = false;
        out.config_index = k;
        out.detail = std::move(why);
        return out;
    };
    for (std::size_t k = 0; k < trace.configs.size(); ++k) {
        const Config& c = trace.configs[k];
        std::set<AgentId> can_post;
        std::set<std::pair<AgentId, FeedKey>> can_follow;
        for (const auto& schema : platform.schemas()) {
            bool post = schema.name == "Post";
            if (!post && !(out.follow_checked && schema.name == "Follow")) continue;
            for (const auto& tuple : schema.candidates(c))
                for (const auto& params : detail::params_for(schema, c, tuple)) {
                    if (!is_enabled(schema, c, std::span<const AgentId>(tuple), params)) continue;
                    if (post) can_post.insert(tuple[0]);
                    else can_follow.emplace(tuple[0], key_from_params(params));
                }
        }

        for (const auto& p : c.agents()) {
            if (!platform.is_initialised(c, p)) continue;
            if (!can_post.count(p)) return fail(k, "Post is not enabled for " + p.str());
            if (!out.follow_checked) continue;
            const auto& mine = feeds_of(c.at(p));
            for (const auto& key : platform.follow_targets(c, p))
                if (!mine.has(key) && !can_follow.count({p, key}))
                    return fail(k, "Follow(" + key.str() + ") is not enabled for " + p.str());
        }
    }
    return out;
}

namespace {

nlohmann::ordered_json delivery_json(const PostDelivery& d) {
    nlohmann::ordered_json j;
    j["poster"] = d.poster.str();
    j["follower"] = d.follower.str();
    j["position"] = d.position;
    j["posted_at"] = d.posted_at;
    j["due_from"] = d.due_from;
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const SafetyVerdict& v) {
    nlohmann::ordered_json j;
    j["property"] = "follower-safety";
    j["verdict"] = v.holds ? "holds" : "violated";
    if (v.config_index) j["first_violation"] = *v.config_index;
    if (!v.detail.empty()) j["detail"] = v.detail;
    return j;
}

nlohmann::ordered_json to_json(const LivenessVerdict& v) {
    nlohmann::ordered_json j;
    j["property"] = "liveness";
    j["verdict"] = to_string(v.status);
    j["window"] = v.window;
    j["exemption"] = v.exemption;
    j["delivered"] = v.delivered;
    j["max_latency"] = v.max_latency;
    auto list = [](const std::vector<PostDelivery>& ds) {
        auto a = nlohmann::ordered_json::array();
        for (const auto& d : ds) a.push_back(delivery_json(d));
        return a;
    };
    j["pending"] = list(v.pending);
    j["undelivered"] = list(v.undelivered);
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

nlohmann::ordered_json to_json(const AutonomyVerdict& v) {
    nlohmann::ordered_json j;
    j["property"] = "autonomy";
    j["verdict"] = v.holds ? "holds" : "violated";
    j["follow_checked"] = v.follow_checked;
    if (v.config_index) j["first_violation"] = *v.config_index;
    if (!v.detail.empty()) j["detail"] = v.detail;
    return j;
}

nlohmann::ordered_json to_json(const FairnessVerdict& v) {
    nlohmann::ordered_json j;
    j["property"] = "fairness";
    j["verdict"] = v.fair ? "holds" : "violated";
    j["window"] = v.window;
    j["max_wait"] = v.max_wait;
    if (v.violation_at) {
        j["first_violation"] = *v.violation_at;
        auto a = nlohmann::ordered_json::array();
        for (const auto& id : v.participants) a.push_back(id.str());
        j["participants"] = std::move(a);
    }
    return j;
}

}  // namespace mats
