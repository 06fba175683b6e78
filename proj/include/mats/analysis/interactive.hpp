#pragma once

#include <optional>

#include "json.hpp"
#include "mats/kernel/reach.hpp"
#include "mats/platforms/platform.hpp"

namespace mats {

enum class Tristate { yes, no, budget_exhausted };
const char* to_string(Tristate t);

struct InteractiveVerdict {
    Tristate verdict = Tristate::yes;
    AgentSet p, p_prime;
    std::size_t depth = 0;
    std::size_t sampled = 0;       // reachable c with c/P in C(P)
    std::size_t with_witness = 0;  // of those, how many can reach c'/P outside C(P)
    std::optional<std::uint64_t> counterexample;  // digest of a c admitting no alien trace
    std::vector<Tx> example;                      // a witness continuation, when one exists
};

/// Over the configurations of F(P') reachable within depth/2 whose projection
/// onto P lies in C(P), search up to the remaining depth for a continuation
/// leaving C(P). `max_samples` caps the starting configurations (BFS order).
InteractiveVerdict check_interactive(const Platform& universe, const AgentSet& p, const AgentSet& p_prime,
                                     std::size_t depth, std::size_t max_samples = 4096,
                                     std::size_t node_budget = default_node_budget());

/// Every nonempty proper P of P', for P' each prefix of the universe of size 2..max_size.
struct InteractiveSweep {
    Tristate verdict = Tristate::yes;
    std::vector<InteractiveVerdict> cases;
};
InteractiveSweep check_interactive_all(const Platform& universe, std::size_t max_size, std::size_t depth,
                                       std::size_t max_samples = 4096,
                                       std::size_t node_budget = default_node_budget());

nlohmann::ordered_json to_json(const InteractiveVerdict& v);

}  // namespace mats
