#include "mats/platforms/local_state.hpp"

#include <sstream>

namespace mats {

std::uint64_t block_identity(std::uint64_t parent, const AgentId& producer,
                             const std::vector<PublishedPost>& payload) {
    Fnv1a h;
    h.u64(parent).field(producer.str()).u64(payload.size());
    for (const auto& p : payload) h.field(p.author.str()).field(p.post);
    return h.value();
}

Chain Chain::genesis() {
    auto n = std::make_shared<Node>();
    n->block.id = block_identity(0, AgentId{}, {});
    n->height = 0;
    return Chain(std::move(n));
}

const Block& Chain::tip() const {
    if (!node_) throw KernelError("empty chain has no tip");
    return node_->block;
}

Chain Chain::append(AgentId producer, std::vector<PublishedPost> payload) const {
    auto n = std::make_shared<Node>();
    n->block.parent = tip_id();
    n->block.id = block_identity(n->block.parent, producer, payload);
    n->block.producer = std::move(producer);
    n->block.payload = std::move(payload);
    n->parent = node_;
    n->height = length();
    return Chain(std::move(n));
}

const Chain::Node* Chain::node_at(std::size_t height) const {
    const Node* n = node_.get();
    while (n && n->height > height) n = n->parent.get();
    return n && n->height == height ? n : nullptr;
}

std::vector<const Block*> Chain::blocks() const {
    std::vector<const Block*> out(length());
    for (const Node* n = node_.get(); n; n = n->parent.get()) out[n->height] = &n->block;
    return out;
}

std::size_t Chain::common_prefix(const Chain& other) const {
    std::size_t h = std::min(length(), other.length());
    if (h == 0) return 0;
    const Node* a = node_at(h - 1);
    const Node* b = other.node_at(h - 1);
    // Identities chain through parents, so equal blocks imply equal prefixes.
    while (a && b && a->block.id != b->block.id) {
        a = a->parent.get();
        b = b->parent.get();
    }
    return a && b ? a->height + 1 : 0;
}

PostSeq Chain::posts_by(const AgentId& author) const {
    PostSeq out;
    for (const Block* b : blocks())
        for (const auto& p : b->payload)
            if (p.author == author) out.push_back(p.post);
    return out;
}

std::size_t Chain::count_posts_by(const AgentId& author, std::size_t prefix_len) const {
    std::size_t n = 0;
    auto bs = blocks();
    for (std::size_t i = 0; i < std::min(prefix_len, bs.size()); ++i)
        for (const auto& p : bs[i]->payload)
            if (p.author == author) ++n;
    return n;
}

const FeedState& feeds_of(const LocalState& s) {
    if (auto* f = std::get_if<FeedState>(&s)) return *f;
    throw KernelError("expected a feed-set local state");
}

const ChainState& chain_of(const LocalState& s) {
    if (auto* c = std::get_if<ChainState>(&s)) return *c;
    throw KernelError("expected a blockchain local state");
}

namespace {

void digest_feeds(Fnv1a& h, const FeedState& f) {
    h.bytes("F").u64(f.feeds.size());
    for (const auto& [key, posts] : f.feeds) {
        h.field(key.agent.str()).field(key.server.str()).u64(posts.size());
        for (const auto& p : posts) h.field(p);
    }
}

void digest_chain(Fnv1a& h, const ChainState& c) {
    h.bytes("C").u64(c.chain.length()).u64(c.chain.tip_id()).u64(c.peers.size());
    for (const auto& p : c.peers) h.field(p.str());
    h.u64(c.posts.size());
    for (const auto& p : c.posts) h.field(p);
    h.u64(c.pointer);
}

}  // namespace

void digest_into(Fnv1a& h, const LocalState& s) {
    std::visit(
        [&](const auto& v) {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, FeedState>)
                digest_feeds(h, v);
            else
                digest_chain(h, v);
        },
        s);
}

std::uint64_t digest(const Config& c) {
    Fnv1a h;
    h.u64(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        h.field(c.agents()[i].str());
        digest_into(h, c.state(i));
    }
    return h.value();
}

AgentSet mentioned_agents(const LocalState& s) {
    AgentSet out;
    if (auto* f = std::get_if<FeedState>(&s)) {
        for (const auto& [key, posts] : f->feeds) {
            out.push_back(key.agent);
            if (key.qualified()) out.push_back(key.server);
        }
    } else {
        const auto& c = std::get<ChainState>(s);
        out.insert(out.end(), c.peers.begin(), c.peers.end());
        for (const Block* b : c.chain.blocks()) {
            if (!b->is_genesis()) out.push_back(b->producer);
            for (const auto& p : b->payload) out.push_back(p.author);
        }
    }
    normalise(out);
    return out;
}

namespace {

std::string seq_str(const PostSeq& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s[i];
    return out + "]";
}

}  // namespace

std::string describe(const LocalState& s) {
    std::ostringstream os;
    if (auto* f = std::get_if<FeedState>(&s)) {
        os << "{";
        bool first = true;
        for (const auto& [key, posts] : f->feeds) {
            os << (first ? "" : ",") << "(" << key.str() << "," << seq_str(posts) << ")";
            first = false;
        }
        os << "}";
    } else {
        const auto& c = std::get<ChainState>(s);
        os << "(chain=" << c.chain.length() << ":" << to_hex(c.chain.tip_id()) << ",peers={";
        for (std::size_t i = 0; i < c.peers.size(); ++i) os << (i ? "," : "") << c.peers[i];
        os << "},posts=" << seq_str(c.posts) << ",pointer=" << c.pointer << ")";
    }
    return os.str();
}

}  // namespace mats

std::size_t std::hash<mats::FeedState>::operator()(const mats::FeedState& s) const noexcept {
    mats::Fnv1a h;
    mats::digest_feeds(h, s);
    return static_cast<std::size_t>(h.value());
}

std::size_t std::hash<mats::ChainState>::operator()(const mats::ChainState& s) const noexcept {
    mats::Fnv1a h;
    h.u64(s.chain.length()).u64(s.chain.tip_id()).u64(s.peers.size());
    for (const auto& p : s.peers) h.field(p.str());
    h.u64(s.posts.size()).u64(s.pointer);
    return static_cast<std::size_t>(h.value());
}
