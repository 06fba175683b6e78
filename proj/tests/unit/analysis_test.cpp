#include <gtest/gtest.h>

#include <algorithm>

#include "mats/analysis/essential.hpp"
#include "mats/analysis/interactive.hpp"
#include "mats/analysis/properties.hpp"
#include "mats/sim/delivery.hpp"

using namespace mats;

namespace {

AgentSet set(std::initializer_list<const char*> names) {
    AgentSet s;
    for (auto n : names) s.emplace_back(n);
    normalise(s);
    return s;
}

bool hits(const AgentSet& h, const AgentSet& s) {
    return std::any_of(s.begin(), s.end(), [&](const AgentId& a) { return std::binary_search(h.begin(), h.end(), a); });
}

bool subset(const AgentSet& a, const AgentSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

// Every subset of `ground` hitting all of `family`, keeping the subset-minimal ones.
std::vector<AgentSet> brute_hitting(const AgentSet& ground, const std::vector<AgentSet>& family) {
    std::vector<AgentSet> all;
    for (std::size_t mask = 0; mask < (1u << ground.size()); ++mask) {
        AgentSet h;
        for (std::size_t i = 0; i < ground.size(); ++i)
            if (mask >> i & 1) h.push_back(ground[i]);
        if (std::all_of(family.begin(), family.end(), [&](const AgentSet& s) { return hits(h, s); })) all.push_back(h);
    }
    std::vector<AgentSet> out;
    for (const auto& h : all)
        if (std::none_of(all.begin(), all.end(), [&](const AgentSet& g) { return g != h && subset(g, h); }))
            out.push_back(h);
    std::sort(out.begin(), out.end(), [](const AgentSet& a, const AgentSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

Trace simulate(PlatformKind kind, std::size_t others, std::uint64_t seed, std::size_t steps = 300) {
    Policy pol;
    pol.seed = seed;
    pol.max_steps = steps;
    return run_simulation(make_universe(kind, others, 2, 2), pol);
}

constexpr PlatformKind kAll[] = {PlatformKind::centralised, PlatformKind::bitcoin, PlatformKind::decentralised,
                                 PlatformKind::federated, PlatformKind::grassroots};

}  // namespace

// ---- hitting sets

TEST(HittingSets, SmallCases) {
    EXPECT_EQ(minimal_hitting_sets({}), (std::vector<AgentSet>{AgentSet{}}));
    EXPECT_EQ(minimal_hitting_sets({set({"a", "b"})}), (std::vector<AgentSet>{set({"a"}), set({"b"})}));
    EXPECT_EQ(minimal_hitting_sets({set({"a", "b"}), set({"b", "c"})}),
              (std::vector<AgentSet>{set({"b"}), set({"a", "c"})}));
}

TEST(HittingSets, AgreesWithBruteForce) {
    Rng rng(17);
    const AgentSet ground = set({"a", "b", "c", "d", "e", "f"});
    for (int round = 0; round < 200; ++round) {
        std::vector<AgentSet> family;
        std::size_t n = 1 + rng.below(5);
        for (std::size_t i = 0; i < n; ++i) {
            AgentSet s;
            for (const auto& a : ground)
                if (rng.bernoulli(0.35)) s.push_back(a);
            if (s.empty()) s.push_back(ground[rng.below(ground.size())]);
            family.push_back(s);
        }
        EXPECT_EQ(minimal_hitting_sets(family), brute_hitting(ground, family)) << "round " << round;
    }
}

// ---- communication

TEST(Communication, Examples) {
    CommunicationOracle central(Platform(make_universe(PlatformKind::centralised, 2)), 6);
    EXPECT_EQ(central.communicates(set({"u1", "u2"})), Communication::silent);
    EXPECT_EQ(central.communicates(set({"s", "u1"})), Communication::communicates);
    EXPECT_EQ(central.communicates(set({"s"})), Communication::silent);
    EXPECT_FALSE(central.witness(set({"s", "u1"})).empty());
    EXPECT_TRUE(central.witness(set({"u1", "u2"})).empty());

    // Both must initialise, follow and post before a Sync changes both sides.
    CommunicationOracle grass(Platform(make_universe(PlatformKind::grassroots, 2)), 7);
    EXPECT_EQ(grass.communicates(set({"a1", "a2"})), Communication::communicates);
    EXPECT_EQ(grass.witness(set({"a1", "a2"})).size(), 7u);
    EXPECT_EQ(grass.communicates(set({"a1"})), Communication::silent);
    CommunicationOracle shallow(Platform(make_universe(PlatformKind::grassroots, 2)), 6);
    EXPECT_EQ(shallow.communicates(set({"a1", "a2"})), Communication::silent);

    CommunicationOracle dec(Platform(make_universe(PlatformKind::decentralised, 1, 0, 1)), 6);
    EXPECT_EQ(dec.communicates(set({"p1", "b1"})), Communication::communicates);
}

TEST(Communication, Monotone) {
    // A superset of a communicating set communicates.
    CommunicationOracle o(Platform(make_universe(PlatformKind::federated, 2, 2)), 6);
    auto u = o.universe().agents();
    for (std::size_t mask = 1; mask < (1u << u.size()); ++mask) {
        AgentSet p;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (mask >> i & 1) p.push_back(u[i]);
        if (o.communicates(p) != Communication::communicates) continue;
        for (const auto& extra : u) {
            AgentSet q = p;
            q.push_back(extra);
            normalise(q);
            EXPECT_EQ(o.communicates(q), Communication::communicates);
        }
    }
}

// ---- essential sets

TEST(Essential, ReportInvariants) {
    for (auto kind : {PlatformKind::centralised, PlatformKind::decentralised, PlatformKind::federated,
                      PlatformKind::grassroots}) {
        auto r = minimal_essential_sets(make_universe(kind, 2, 2, 2), 8);
        EXPECT_TRUE(r.exact) << to_string(kind);
        ASSERT_FALSE(r.minimal_sets.empty()) << to_string(kind);
        auto hitting = r.minimal_sets;
        hitting.insert(hitting.end(), r.excluded_sets.begin(), r.excluded_sets.end());
        EXPECT_EQ(minimal_hitting_sets(r.communicating).size(), hitting.size());
        for (const auto& h : r.minimal_sets) {
            for (const auto& s : r.communicating) EXPECT_TRUE(hits(h, s)) << to_string(kind);
            for (const auto& g : r.minimal_sets) EXPECT_FALSE(g != h && subset(g, h));
        }
        std::size_t least = r.minimal_sets.front().size();
        for (const auto& h : r.minimal_sets) least = std::min(least, h.size());
        EXPECT_EQ(r.min_cardinality, least);
        for (const auto& h : r.minimum_sets) EXPECT_EQ(h.size(), least);
    }
}

TEST(Essential, KnownSets) {
    auto c = minimal_essential_sets(make_universe(PlatformKind::centralised, 3), 8);
    EXPECT_EQ(c.minimum_sets, (std::vector<AgentSet>{set({"s"})}));

    auto d = minimal_essential_sets(make_universe(PlatformKind::decentralised, 1, 0, 2), 8);
    EXPECT_EQ(d.min_cardinality, 2u);
    EXPECT_EQ(d.minimum_sets, (std::vector<AgentSet>{set({"b1", "b2"})}));

    auto f = minimal_essential_sets(make_universe(PlatformKind::federated, 2, 2), 8);
    EXPECT_EQ(f.min_cardinality, 2u);
    EXPECT_NE(std::find(f.minimum_sets.begin(), f.minimum_sets.end(), set({"s1", "s2"})), f.minimum_sets.end());

    // Grassroots: any agent can be left out.
    auto g = minimal_essential_sets(make_universe(PlatformKind::grassroots, 3), 8);
    for (const auto& h : g.minimal_sets) EXPECT_GE(h.size(), 2u);
}

TEST(Classify, Verdicts) {
    const std::pair<PlatformKind, PlatformClass> expected[] = {
        {PlatformKind::centralised, PlatformClass::centralised},
        {PlatformKind::decentralised, PlatformClass::decentralised},
        {PlatformKind::federated, PlatformClass::federated},
        {PlatformKind::grassroots, PlatformClass::grassroots},
    };
    for (const auto& [kind, cls] : expected) {
        auto r = classify(kind, default_family(kind), 8);
        EXPECT_EQ(r.verdict, cls) << to_string(kind);
        EXPECT_TRUE(r.exact());
        EXPECT_GE(r.universes.size(), 3u);
        std::size_t matched = 0;
        for (const auto& [c, ok] : r.predicates) matched += ok;
        EXPECT_EQ(matched, 1u) << to_string(kind);
    }
}

TEST(Classify, JsonFields) {
    auto r = classify(PlatformKind::centralised, default_family(PlatformKind::centralised), 6);
    auto j = to_json(r);
    EXPECT_EQ(j["class"], "Centralised");
    ASSERT_TRUE(j["universes"].is_array());
    auto u = j["universes"][0];
    for (const char* k : {"universe", "minimal_sets", "min_cardinality", "quality"}) EXPECT_TRUE(u.contains(k)) << k;
}

TEST(Classify, Unbounded) {
    EXPECT_EQ(unbounded_role(PlatformKind::centralised), Role::client);
    EXPECT_EQ(unbounded_role(PlatformKind::decentralised), Role::peer);
}

// ---- interactivity

TEST(Interactive, GrassrootsIsInteractive) {
    Platform g(make_universe(PlatformKind::grassroots, 3));
    auto v = check_interactive(g, set({"a1"}), set({"a1", "a2"}), 8);
    EXPECT_EQ(v.verdict, Tristate::yes);
    EXPECT_GT(v.sampled, 0u);
    EXPECT_EQ(v.with_witness, v.sampled);
    EXPECT_FALSE(v.example.empty());
}

TEST(Interactive, ServerlessUsersAreNot) {
    Platform c(make_universe(PlatformKind::centralised, 3));
    auto v = check_interactive(c, set({"u1"}), set({"u1", "u2"}), 8);
    EXPECT_EQ(v.verdict, Tristate::no);
    EXPECT_TRUE(v.counterexample);
}

TEST(Interactive, RejectsBadSets) {
    Platform g(make_universe(PlatformKind::grassroots, 3));
    EXPECT_ANY_THROW(check_interactive(g, set({"a1", "a2"}), set({"a1", "a2"}), 4));
    EXPECT_ANY_THROW(check_interactive(g, set({"a1"}), set({"a1", "a2"}), 0));
}

// ---- properties on simulated runs

TEST(Safety, HoldsOnSimulatedRuns) {
    for (auto kind : kAll)
        for (std::uint64_t seed = 0; seed < 5; ++seed)
            EXPECT_TRUE(check_follower_safety(simulate(kind, 3, seed)).holds) << to_string(kind) << " " << seed;
}

TEST(Safety, InjectedViolationsAreCaught) {
    for (auto kind : kAll) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto t = simulate(kind, 3, seed);
            Rng rng(seed);
            std::size_t at = t.configs.size() - 1;
            ASSERT_TRUE(inject_safety_violation(t, at, rng)) << to_string(kind);
            auto v = check_follower_safety(t);
            EXPECT_FALSE(v.holds) << to_string(kind) << " " << seed;
            EXPECT_EQ(v.config_index, at);
            EXPECT_FALSE(v.detail.empty());
        }
    }
}

TEST(Liveness, DeliversOnFairRuns) {
    for (auto kind : {PlatformKind::centralised, PlatformKind::federated, PlatformKind::grassroots}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto t = simulate(kind, 2, seed, 400);
            auto v = check_liveness(t, t.policy.window);
            EXPECT_NE(v.status, LivenessVerdict::Status::violated) << to_string(kind);
            EXPECT_NE(v.status, LivenessVerdict::Status::inapplicable) << to_string(kind);
            EXPECT_TRUE(v.undelivered.empty());
            EXPECT_EQ(v.exemption, Platform(t.platform).delivery_hops() * t.policy.window);
        }
    }
}

TEST(Liveness, VacuousOnChains) {
    auto v = check_liveness(simulate(PlatformKind::decentralised, 2, 1), 10);
    EXPECT_EQ(v.status, LivenessVerdict::Status::holds);
    EXPECT_FALSE(v.note.empty());
}

TEST(Liveness, UnfairTraceIsInapplicable) {
    // Register, Register, Post, then posts with no Sync at all.
    auto cfg = make_universe(PlatformKind::centralised, 2);
    Platform p(cfg);
    Config c = p.initial_configuration();
    std::vector<Tx> steps;
    auto take = [&](std::string_view schema, const AgentId& first) {
        for (auto& t : enabled_instances_of(p.schemas(), c, schema))
            if (t.participants.front() == first) {
                c = apply(p.schemas(), c, t);
                steps.push_back(t);
                return;
            }
        FAIL() << schema;
    };
    take("Register", AgentId{"s"});
    take("Register", AgentId{"s"});
    for (int i = 0; i < 6; ++i) take("Post", AgentId{"u1"});
    auto v = check_liveness(make_trace(cfg, Policy{}, steps), 2);
    EXPECT_EQ(v.status, LivenessVerdict::Status::inapplicable);
}

TEST(Liveness, PendingAtTheEndOfAShortRun) {
    // Post-heavy short runs leave fresh posts undelivered but still exempt.
    bool saw_pending = false;
    for (std::uint64_t seed = 0; seed < 20 && !saw_pending; ++seed) {
        Policy pol;
        pol.seed = seed;
        pol.max_steps = 40;
        pol.rate_post = 1.0;
        auto t = run_simulation(make_universe(PlatformKind::federated, 2, 2), pol);
        auto v = check_liveness(t, pol.window);
        EXPECT_TRUE(v.undelivered.empty());
        saw_pending = v.status == LivenessVerdict::Status::pending;
    }
    EXPECT_TRUE(saw_pending);
}

TEST(Autonomy, HoldsAndSkipsFollowOnChains) {
    for (auto kind : kAll) {
        auto v = check_autonomy(simulate(kind, 3, 2));
        EXPECT_TRUE(v.holds) << to_string(kind) << ": " << v.detail;
        bool chain = kind == PlatformKind::decentralised || kind == PlatformKind::bitcoin;
        EXPECT_EQ(v.follow_checked, !chain);
    }
}

TEST(Properties, JsonShapes) {
    auto t = simulate(PlatformKind::grassroots, 2, 3);
    auto s = to_json(check_follower_safety(t));
    EXPECT_EQ(s["property"], "follower-safety");
    EXPECT_EQ(s["verdict"], "holds");
    auto l = to_json(check_liveness(t, 10));
    EXPECT_EQ(l["property"], "liveness");
    EXPECT_TRUE(l["pending"].is_array());
    auto a = to_json(check_autonomy(t));
    EXPECT_EQ(a["follow_checked"], true);
    auto f = to_json(check_fairness(t, 10));
    EXPECT_EQ(f["window"], 10);
}
