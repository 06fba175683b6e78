#include "mats/analysis/interactive.hpp"

namespace mats {

const char* to_string(Tristate t) {
    switch (t) {
        case Tristate::yes: return "true";
        case Tristate::no: return "false";
        case Tristate::budget_exhausted: return "budget-exhausted";
    }
    return "?";
}

InteractiveVerdict check_interactive(const Platform& universe, const AgentSet& p_in, const AgentSet& pp_in,
                                     std::size_t depth, std::size_t max_samples, std::size_t node_budget) {
    AgentSet p = p_in, pp = pp_in;
    normalise(p);
    normalise(pp);
    if (p.empty() || !is_subset(p, pp) || p.size() == pp.size())
        throw KernelError("interactivity needs a nonempty P strictly inside P'");
    if (depth < 1) throw KernelError("interactivity depth must be at least 1");

    Platform f = universe.restrict(pp);
    const auto& pred = f.states();
    auto inside = [&](const Config& c) { return in_configuration_space(project(c, p), p, pred); };

    InteractiveVerdict out;
    out.p = p;
    out.p_prime = pp;
    out.depth = depth;

    const std::size_t head = depth / 2;
    auto reach = reachable_configurations(f.schemas(), f.initial_configuration(), head, node_budget);
    bool exhausted = !reach.complete;
    ReachGoal<LocalState> goal;
    goal.on_config = [&](const Config& c) { return !inside(c); };

    for (const auto& c : reach.configs) {
        if (out.sampled >= max_samples) break;
        if (!inside(c)) continue;
        ++out.sampled;
        auto r = bounded_reach(f.schemas(), c, depth - head, goal, node_budget);
        if (r.verdict == ReachVerdict::found) {
            ++out.with_witness;
            if (out.example.empty()) out.example = std::move(r.witness);
        } else if (r.verdict == ReachVerdict::budget_exhausted) {
            exhausted = true;
        } else if (!out.counterexample) {
            out.counterexample = digest(c);
        }
    }
    if (out.counterexample || out.sampled == 0)
        out.verdict = Tristate::no;
    else if (exhausted)
        out.verdict = Tristate::budget_exhausted;
    else
        out.verdict = Tristate::yes;
    return out;
}

InteractiveSweep check_interactive_all(const Platform& universe, std::size_t max_size, std::size_t depth,
                                       std::size_t max_samples, std::size_t node_budget) {
    InteractiveSweep out;
    const AgentSet& all = universe.agents();
    bool exhausted = false;
    for (std::size_t n = 2; n <= std::min(max_size, all.size()); ++n) {
        AgentSet pp(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
        for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << n); ++m) {
            AgentSet p;
            for (std::size_t i = 0; i < n; ++i)
                if (m >> i & 1) p.push_back(pp[i]);
            auto v = check_interactive(universe, p, pp, depth, max_samples, node_budget);
            if (v.verdict == Tristate::no) out.verdict = Tristate::no;
            if (v.verdict == Tristate::budget_exhausted) exhausted = true;
            out.cases.push_back(std::move(v));
        }
    }
    if (out.verdict != Tristate::no && exhausted) out.verdict = Tristate::budget_exhausted;
    return out;
}

nlohmann::ordered_json to_json(const InteractiveVerdict& v) {
    auto ids = [](const AgentSet& s) {
        auto a = nlohmann::ordered_json::array();
        for (const auto& id : s) a.push_back(id.str());
        return a;
    };
    nlohmann::ordered_json j;
    j["P"] = ids(v.p);
    j["P_prime"] = ids(v.p_prime);
    j["depth"] = v.depth;
    j["interactive"] = to_string(v.verdict);
    j["sampled"] = v.sampled;
    j["with_witness"] = v.with_witness;
    if (v.counterexample) j["counterexample_digest"] = to_hex(*v.counterexample);
    if (!v.example.empty()) {
        auto w = nlohmann::ordered_json::array();
        for (const auto& t : v.example) {
            std::string s = t.schema;
            for (const auto& a : t.participants) s += " " + a.str();
            w.push_back(s);
        }
        j["example"] = std::move(w);
    }
    return j;
}

}  // namespace mats
