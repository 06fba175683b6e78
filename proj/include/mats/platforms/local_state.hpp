#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mats/kernel/agent.hpp"
#include "mats/kernel/configuration.hpp"
#include "mats/kernel/hash.hpp"
#include "mats/kernel/schema.hpp"
#include "mats/kernel/transaction.hpp"

namespace mats {

using PostValue = std::string;
using PostSeq = std::vector<PostValue>;  // Λ is the empty sequence

/// Feed owner key: a plain agent, or a qualified agent@server pair.
struct FeedKey {
    AgentId agent;
    AgentId server;  // empty for unqualified keys

    bool qualified() const noexcept { return !server.empty(); }
    std::string str() const { return qualified() ? agent.str() + "@" + server.str() : agent.str(); }

    friend auto operator<=>(const FeedKey&, const FeedKey&) = default;
    friend bool operator==(const FeedKey&, const FeedKey&) = default;
};

inline FeedKey plain_key(AgentId a) { return FeedKey{std::move(a), AgentId{}}; }
inline FeedKey qualified_key(AgentId a, AgentId s) { return FeedKey{std::move(a), std::move(s)}; }

/// A set of feeds, at most one per owner key. Initial state is empty.
struct FeedState {
    std::map<FeedKey, PostSeq> feeds;

    bool empty() const noexcept { return feeds.empty(); }
    bool has(const FeedKey& k) const { return feeds.count(k) != 0; }
    const PostSeq* find(const FeedKey& k) const {
        auto it = feeds.find(k);
        return it == feeds.end() ? nullptr : &it->second;
    }

    friend bool operator==(const FeedState&, const FeedState&) = default;
};

/// One (author, post) entry of a block payload.
struct PublishedPost {
    AgentId author;
    PostValue post;
    friend bool operator==(const PublishedPost&, const PublishedPost&) = default;
};

struct Block {
    AgentId producer;                   // empty for the genesis block
    std::vector<PublishedPost> payload;
    std::uint64_t parent = 0;           // digest of the preceding chain prefix
    std::uint64_t id = 0;               // digest of (parent, producer, payload)

    bool is_genesis() const noexcept { return producer.empty(); }
};

std::uint64_t block_identity(std::uint64_t parent, const AgentId& producer,
                             const std::vector<PublishedPost>& payload);

/// Immutable, structurally shared blockchain. Two chains agree at a position
/// iff their blocks there have the same identity, which covers the whole prefix.
class Chain {
public:
    Chain() = default;  // Λ

    static Chain genesis();

    std::size_t length() const noexcept { return node_ ? node_->height + 1 : 0; }
    bool empty() const noexcept { return !node_; }
    std::uint64_t tip_id() const noexcept { return node_ ? node_->block.id : 0; }
    const Block& tip() const;

    Chain append(AgentId producer, std::vector<PublishedPost> payload) const;

    /// Blocks from genesis to tip.
    std::vector<const Block*> blocks() const;
    /// Length of the longest common prefix of the two chains.
    std::size_t common_prefix(const Chain& other) const;
    bool is_prefix_of(const Chain& other) const { return common_prefix(other) == length(); }

    /// Posts by `author` in chain order.
    PostSeq posts_by(const AgentId& author) const;
    /// Posts by `author` in the first `prefix_len` blocks.
    std::size_t count_posts_by(const AgentId& author, std::size_t prefix_len) const;

    friend bool operator==(const Chain& a, const Chain& b) noexcept {
        return a.length() == b.length() && a.tip_id() == b.tip_id();
    }

private:
    struct Node {
        Block block;
        std::shared_ptr<const Node> parent;
        std::size_t height = 0;
    };
    explicit Chain(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    const Node* node_at(std::size_t height) const;

    std::shared_ptr<const Node> node_;
};

/// (chain, peers, posts, pointer). The Bitcoin substrate leaves posts empty
/// and pointer at 0.
struct ChainState {
    Chain chain;
    AgentSet peers;
    PostSeq posts;
    std::size_t pointer = 0;

    friend bool operator==(const ChainState&, const ChainState&) = default;
};

using LocalState = std::variant<FeedState, ChainState>;
using Config = Configuration<LocalState>;
using Tx = Transaction<LocalState>;
using Schema = TransactionSchema<LocalState>;
using Schemas = SchemaSet<LocalState>;
using StatesPredicate = LocalStatesPredicate<LocalState>;

const FeedState& feeds_of(const LocalState& s);
const ChainState& chain_of(const LocalState& s);

/// Stable digest of a local state / configuration (canonical serialisation fed to FNV-1a).
void digest_into(Fnv1a& h, const LocalState& s);
std::uint64_t digest(const Config& c);

/// Every agent identity mentioned by a state, excluding the genesis producer.
AgentSet mentioned_agents(const LocalState& s);

/// Human-readable rendering used in diagnostics and the Python bindings.
std::string describe(const LocalState& s);

}  // namespace mats

template <>
struct std::hash<mats::FeedState> {
    std::size_t operator()(const mats::FeedState& s) const noexcept;
};
template <>
struct std::hash<mats::ChainState> {
    std::size_t operator()(const mats::ChainState& s) const noexcept;
};
