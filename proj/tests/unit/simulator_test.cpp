#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mats/sim/delivery.hpp"
#include "mats/sim/reorg.hpp"
#include "mats/sim/trace_io.hpp"

using namespace mats;

namespace {

AgentId id(const char* s) { return AgentId{s}; }

std::string jsonl(const Trace& t) {
    std::ostringstream out;
    write_trace_jsonl(out, t);
    return out.str();
}

Trace parse(const std::string& text) {
    std::istringstream in(text);
    return read_trace_jsonl(in);
}

// Applies the first enabled instance of `schema` over `who` (and `params` when given).
Tx pick(const Platform& p, const Config& c, std::string_view schema, std::vector<const char*> who,
        Params params = {}) {
    std::vector<AgentId> q;
    for (auto w : who) q.emplace_back(w);
    for (auto& t : enabled_instances_of(p.schemas(), c, schema))
        if (t.participants == q && (params.empty() || t.params == params)) return t;
    throw std::runtime_error("not enabled: " + std::string(schema));
}

// Centralised: register u1 and u2, u2 follows u1, then u1 posts `posts` times
// without anyone syncing.
Trace starved_trace(std::size_t posts) {
    auto cfg = make_universe(PlatformKind::centralised, 2);
    Platform p(cfg);
    std::vector<Tx> steps;
    Config c = p.initial_configuration();
    auto push = [&](Tx t) {
        c = apply(p.schemas(), c, t);
        steps.push_back(std::move(t));
    };
    push(pick(p, c, "Register", {"s", "u1"}));
    push(pick(p, c, "Register", {"s", "u2"}));
    for (std::size_t i = 0; i < posts; ++i) push(pick(p, c, "Post", {"u1"}));
    return make_trace(cfg, Policy{}, steps);
}

}  // namespace

TEST(Policy, Validation) {
    Policy p;
    EXPECT_NO_THROW(p.validate());
    p.rate_post = 1.5;
    EXPECT_THROW(p.validate(), ConfigError);
    p = Policy{};
    p.window = 0;
    EXPECT_THROW(p.validate(), ConfigError);
    EXPECT_DOUBLE_EQ(Policy{}.weight_of("Register"), Policy{}.rate_join);
    EXPECT_DOUBLE_EQ(Policy{}.weight_of("Unknown"), 0.0);
}

TEST(Simulator, SameSeedSameTrace) {
    for (auto kind : {PlatformKind::centralised, PlatformKind::bitcoin, PlatformKind::decentralised,
                      PlatformKind::federated, PlatformKind::grassroots}) {
        auto cfg = make_universe(kind, 3, 2, 2);
        Policy pol;
        pol.seed = 42;
        pol.max_steps = 150;
        auto a = jsonl(run_simulation(cfg, pol));
        EXPECT_EQ(a, jsonl(run_simulation(cfg, pol))) << to_string(kind);
        pol.seed = 43;
        EXPECT_NE(a, jsonl(run_simulation(cfg, pol))) << to_string(kind);
    }
}

TEST(Simulator, RejectsInvalidConfig) {
    auto cfg = make_universe(PlatformKind::decentralised, 2, 0, 0);
    EXPECT_THROW(run_simulation(cfg, Policy{}), ConfigError);
}

TEST(Simulator, QuiescentWhenNothingIsAllowed) {
    Policy pol;
    pol.rate_join = 0;
    auto t = run_simulation(make_universe(PlatformKind::grassroots, 1), pol);
    EXPECT_TRUE(t.quiescent);
    EXPECT_TRUE(t.steps.empty());
    EXPECT_EQ(t.configs.size(), 1u);
}

TEST(Simulator, StepsRecordActiveSetsAndDigests) {
    auto t = run_simulation(make_universe(PlatformKind::federated, 3, 2), Policy{});
    ASSERT_EQ(t.configs.size(), t.steps.size() + 1);
    for (const auto& s : t.steps) {
        EXPECT_EQ(s.active, participants_of(s.tx).active);
        EXPECT_FALSE(s.active.empty());
        EXPECT_EQ(s.digest, digest(t.configs[s.index + 1]));
    }
}

TEST(TraceIo, ReplayReproducesConfigurations) {
    for (auto kind : {PlatformKind::centralised, PlatformKind::decentralised, PlatformKind::grassroots}) {
        Policy pol;
        pol.seed = 5;
        auto t = run_simulation(make_universe(kind, 3, 1, 1), pol);
        auto back = parse(jsonl(t));
        EXPECT_EQ(back.configs, t.configs);
        EXPECT_EQ(back.policy.seed, 5u);
        EXPECT_EQ(jsonl(back), jsonl(t));
    }
}

TEST(TraceIo, RecordShape) {
    auto t = run_simulation(make_universe(PlatformKind::grassroots, 2), Policy{});
    std::istringstream in(jsonl(t));
    std::string line;
    std::getline(in, line);
    auto header = nlohmann::json::parse(line);
    EXPECT_EQ(header["type"], "header");
    EXPECT_TRUE(header.contains("seed"));
    EXPECT_TRUE(header.contains("platform"));
    EXPECT_TRUE(header.contains("policy"));
    std::getline(in, line);
    auto rec = nlohmann::json::parse(line);
    for (const char* k : {"step", "schema", "participants", "active", "params", "digest"})
        EXPECT_TRUE(rec.contains(k)) << k;
    EXPECT_EQ(rec["step"], 0);
    EXPECT_EQ(rec["digest"].get<std::string>().size(), 16u);
}

TEST(TraceIo, TamperingIsDetected) {
    auto t = run_simulation(make_universe(PlatformKind::grassroots, 3), Policy{});
    auto text = jsonl(t);
    ASSERT_GT(t.steps.size(), 3u);

    auto digest_hex = to_hex(t.steps[2].digest);
    auto bad = text;
    bad.replace(bad.find(digest_hex), digest_hex.size(), std::string(16, '0'));
    EXPECT_THROW(parse(bad), TraceError);

    // Drop a step: the next one is out of sequence.
    std::istringstream in(text);
    std::string line, dropped;
    for (int i = 0; std::getline(in, line); ++i)
        if (i != 2) dropped += line + "\n";
    EXPECT_THROW(parse(dropped), TraceError);

    EXPECT_THROW(parse(""), TraceError);
    EXPECT_THROW(parse("{not json\n"), TraceError);
    EXPECT_THROW(parse(text.substr(text.find('\n') + 1)), TraceError);  // no header
}

TEST(TraceIo, PolicyJson) {
    Policy p;
    p.seed = 9;
    p.window = 4;
    p.join_before_mining = false;
    auto back = policy_from_json(nlohmann::json::parse(to_json(p).dump()));
    EXPECT_EQ(back.seed, 9u);
    EXPECT_EQ(back.window, 4u);
    EXPECT_FALSE(back.join_before_mining);
    Policy base;
    base.max_steps = 77;
    EXPECT_EQ(policy_from_json(nlohmann::json::object(), base).max_steps, 77u);
    EXPECT_THROW(policy_from_json(nlohmann::json::array()), ConfigError);
}

// ---- fairness

TEST(Fairness, ObligationsFollowThePlatformRule) {
    auto cfg = make_universe(PlatformKind::centralised, 2);
    Platform p(cfg);
    Config c = p.initial_configuration();
    EXPECT_TRUE(fairness_obligations(p, c).empty());
    c = apply(p.schemas(), c, pick(p, c, "Register", {"s", "u1"}));
    c = apply(p.schemas(), c, pick(p, c, "Register", {"s", "u2"}));
    auto obs = fairness_obligations(p, c);
    ASSERT_EQ(obs.size(), 2u);
    EXPECT_EQ(obs[0].participants, (std::vector<AgentId>{id("u1"), id("s")}));
    EXPECT_EQ(obs[1].participants, (std::vector<AgentId>{id("u2"), id("s")}));
    EXPECT_FALSE(obs[0].enabled);  // nothing to exchange yet

    Platform g(make_universe(PlatformKind::grassroots, 3));
    Config gc = g.initial_configuration();
    for (const char* a : {"a1", "a2", "a3"}) gc = apply(g.schemas(), gc, pick(g, gc, "Initialise", {a}));
    EXPECT_TRUE(fairness_obligations(g, gc).empty());
}

TEST(Fairness, RemoteFollowObligesServers) {
    Platform p(delivery_universe(PlatformKind::federated));
    Config c = p.initial_configuration();
    c = apply(p.schemas(), c, pick(p, c, "Register", {"p", "r"}));
    c = apply(p.schemas(), c, pick(p, c, "Register", {"q", "s"}));
    c = apply(p.schemas(), c, pick(p, c, "Follow", {"q"}));
    c = apply(p.schemas(), c, pick(p, c, "Sync", {"q", "s"}));
    bool servers = false;
    for (const auto& ob : fairness_obligations(p, c))
        servers = servers || ob.participants == std::vector<AgentId>{id("r"), id("s")};
    EXPECT_TRUE(servers);
}

TEST(Fairness, StarvedSyncIsAViolation) {
    // After the first post u1's Sync with s is enabled and never taken.
    auto t = starved_trace(5);
    auto v = check_fairness(t, 3);
    EXPECT_FALSE(v.fair);
    ASSERT_TRUE(v.violation_at);
    EXPECT_EQ(*v.violation_at, 3u + 3u);  // enabled at config 3, still pending at 6
    EXPECT_EQ(v.participants, (std::vector<AgentId>{id("u1"), id("s")}));
    EXPECT_TRUE(check_fairness(t, 10).fair);
    EXPECT_TRUE(check_fairness(starved_trace(0), 1).fair);
}

TEST(Fairness, EmptyTraceIsFair) {
    auto t = make_trace(make_universe(PlatformKind::grassroots, 2), Policy{}, {});
    EXPECT_TRUE(check_fairness(t, 1).fair);
}

TEST(Fairness, DueObligationIsServed) {
    Platform p(make_universe(PlatformKind::centralised, 2));
    Config c = p.initial_configuration();
    c = apply(p.schemas(), c, pick(p, c, "Register", {"s", "u1"}));
    c = apply(p.schemas(), c, pick(p, c, "Post", {"u1"}));
    Policy pol;
    pol.window = 4;
    pol.rate_post = 1.0;  // voluntary actions are attractive
    Obligation ob;
    ob.participants = {id("u1"), id("s")};
    ob.enabled = true;
    ob.since = 10;
    Rng rng(1);
    auto t = schedule_step(p, c, 13, {ob}, pol, rng);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->schema, "Sync");
    EXPECT_EQ(t->participants, ob.participants);
}

TEST(Fairness, SchedulerMeetsTheWindow) {
    // Property: every simulated run on a small universe is window-fair. W has to
    // cover the fan-out; federated with 5 agents misses W=4 about half the time.
    for (auto kind : {PlatformKind::centralised, PlatformKind::bitcoin, PlatformKind::decentralised,
                      PlatformKind::federated, PlatformKind::grassroots}) {
        for (std::size_t w : {5u, 10u}) {
            for (std::uint64_t seed = 0; seed < 8; ++seed) {
                Policy pol;
                pol.seed = seed;
                pol.window = w;
                pol.max_steps = 200;
                auto t = run_simulation(make_universe(kind, 3, 2, 1), pol);
                auto v = check_fairness(t, w);
                EXPECT_TRUE(v.fair) << to_string(kind) << " W=" << w << " seed=" << seed;
                EXPECT_LT(v.max_wait, w);
            }
        }
    }
}

TEST(Fairness, OnlySyncsWhenVoluntaryRatesAreZero) {
    Policy pol;
    pol.rate_post = pol.rate_follow = pol.rate_join = 0;
    auto t = run_simulation(make_universe(PlatformKind::grassroots, 3), pol);
    EXPECT_TRUE(t.quiescent);
    EXPECT_TRUE(t.steps.empty());
}

// ---- delivery

TEST(Delivery, MinimalPaths) {
    const std::pair<PlatformKind, std::pair<std::size_t, std::size_t>> expected[] = {
        {PlatformKind::centralised, {6, 3}},
        {PlatformKind::federated, {8, 4}},
        {PlatformKind::grassroots, {5, 2}},
    };
    for (const auto& [kind, want] : expected) {
        Platform p(delivery_universe(kind));
        auto d = minimal_delivery_path(p, id("p"), id("q"));
        ASSERT_TRUE(d.found()) << to_string(kind);
        EXPECT_EQ(d.initial.size(), want.first) << to_string(kind);
        EXPECT_EQ(d.subsequent.size(), want.second) << to_string(kind);
        // The path really delivers.
        Config c = p.initial_configuration();
        for (const auto& t : d.initial) c = apply(p.schemas(), c, t);
        EXPECT_EQ(delivered_count(p, c, id("p"), id("q")), 1u);
        for (const auto& t : d.subsequent) c = apply(p.schemas(), c, t);
        EXPECT_EQ(delivered_count(p, c, id("p"), id("q")), 2u);
    }
}

TEST(Delivery, DecentralisedExists) {
    Platform p(delivery_universe(PlatformKind::decentralised));
    auto d = minimal_delivery_path(p, id("p"), id("q"));
    EXPECT_TRUE(d.found());
    EXPECT_GT(d.initial.size(), 0u);
}

TEST(Delivery, DepthTooSmall) {
    Platform p(delivery_universe(PlatformKind::federated));
    auto d = minimal_delivery_path(p, id("p"), id("q"), 7);
    EXPECT_FALSE(d.found());
    EXPECT_EQ(d.initial_verdict, ReachVerdict::not_found);
}

// ---- reorgs

TEST(Reorg, NoBlocksNoReorgs) {
    Policy pol;
    pol.p_block = 0;
    pol.max_steps = 100;
    auto h = reorg_depth_histogram(make_universe(PlatformKind::bitcoin, 3, 0, 1), pol, 20);
    EXPECT_EQ(h.blocks_produced, 0u);
    EXPECT_EQ(h.reorg_events, 0u);
    EXPECT_DOUBLE_EQ(h.frequency(1), 0.0);
}

TEST(Reorg, SingleMinerNeverReorgs) {
    Policy pol;
    pol.max_steps = 100;
    pol.p_block = 0.5;
    auto h = reorg_depth_histogram(make_universe(PlatformKind::bitcoin, 0, 0, 1), pol, 10);
    EXPECT_GT(h.blocks_produced, 0u);
    EXPECT_EQ(h.reorg_events, 0u);
}

TEST(Reorg, FrequentMiningCausesReorgs) {
    Policy pol;
    pol.max_steps = 200;
    pol.p_block = 0.5;
    pol.p_sync = 0.1;
    auto h = reorg_depth_histogram(make_universe(PlatformKind::bitcoin, 3, 0, 1), pol, 30);
    EXPECT_GT(h.reorg_events, 0u);
    EXPECT_GT(h.count(1), 0u);
}

TEST(Reorg, DeterministicPerSeed) {
    Policy pol;
    pol.max_steps = 150;
    pol.p_block = 0.3;
    auto u = make_universe(PlatformKind::decentralised, 3, 0, 1);
    auto a = reorg_depth_histogram(u, pol, 15);
    auto b = reorg_depth_histogram(u, pol, 15);
    EXPECT_EQ(a.abandoned, b.abandoned);
    EXPECT_EQ(a.blocks_produced, b.blocks_produced);
}

TEST(Reorg, Errors) {
    EXPECT_THROW(reorg_depth_histogram(make_universe(PlatformKind::bitcoin, 2, 0, 1), Policy{}, 0), ConfigError);
    EXPECT_THROW(reorg_depth_histogram(make_universe(PlatformKind::grassroots, 2), Policy{}, 3), ConfigError);
}

TEST(Reorg, HistogramStatistics) {
    ReorgHistogram h;
    h.blocks_produced = 1000;
    h.abandoned = {{1, 100}, {2, 30}, {3, 31}, {4, 60}};
    EXPECT_DOUBLE_EQ(h.frequency(1), 0.1);
    EXPECT_DOUBLE_EQ(h.frequency(9), 0.0);
    auto [lo, hi] = h.interval(1);
    EXPECT_LT(lo, 0.1);
    EXPECT_GT(hi, 0.1);
    // Wilson interval, computed by hand for 100/1000.
    EXPECT_NEAR(lo, 0.0829092, 1e-6);
    EXPECT_NEAR(hi, 0.1201524, 1e-6);
    EXPECT_TRUE(h.non_increasing_at(1));
    EXPECT_TRUE(h.non_increasing_at(2));  // 30 -> 31 is noise
    EXPECT_FALSE(h.non_increasing_at(3));  // 31 -> 60 is not

    ReorgHistogram other;
    other.trials = 2;
    other.blocks_produced = 10;
    other.abandoned = {{1, 5}};
    h.merge(other);
    EXPECT_EQ(h.blocks_produced, 1010u);
    EXPECT_EQ(h.count(1), 105u);
}
