#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mats/kernel/reach.hpp"
#include "mats/platforms/platform.hpp"

namespace mats {

enum class Communication { communicates, silent, budget_exhausted };
const char* to_string(Communication c);

/// communicates(P): some run of F(P) within the depth bound applies a
/// transaction of degree >= 2. Memoised per agent set; safe to share.
class CommunicationOracle {
public:
    CommunicationOracle(Platform universe, std::size_t depth,
                        std::size_t node_budget = default_node_budget());

    Communication communicates(const AgentSet& p);
    /// The witness computation for a communicating set (empty otherwise).
    std::vector<Tx> witness(const AgentSet& p) const;

    const Platform& universe() const noexcept { return universe_; }
    std::size_t depth() const noexcept { return depth_; }
    std::size_t queries() const;

private:
    struct Entry {
        Communication verdict;
        std::vector<Tx> witness;
    };
    Platform universe_;
    std::size_t depth_;
    std::size_t budget_;
    mutable std::mutex mu_;
    std::map<AgentSet, Entry> memo_;
};

/// Subset-minimal sets hitting every member of `family` (Berge's algorithm).
/// Sorted by (size, members).
std::vector<AgentSet> minimal_hitting_sets(const std::vector<AgentSet>& family);

/// Subset-minimal communicating subsets of the universe, by increasing size;
/// supersets of a communicating set are never queried (communication is monotone).
/// Budget-exhausted sets are treated as communicating and flagged via `bounded`.
std::vector<AgentSet> minimal_communicating_sets(CommunicationOracle& oracle, bool* bounded = nullptr);

struct EssentialReport {
    PlatformKind kind{};
    AgentSet universe;
    std::map<AgentId, Role> roles;
    std::vector<AgentSet> communicating;  // minimal communicating sets
    std::vector<AgentSet> minimal_sets;   // admissible subset-minimal essential sets
    std::vector<AgentSet> excluded_sets;  // hitting sets covering a whole unbounded role
    std::size_t min_cardinality = 0;
    std::vector<AgentSet> minimum_sets;   // minimal_sets of size min_cardinality
    bool exact = true;
    std::size_t depth = 0;

    const char* quality() const { return exact ? "exact" : "bounded"; }
};

/// Role whose members are unboundedly many in the infinite universe.
Role unbounded_role(PlatformKind kind);

EssentialReport minimal_essential_sets(CommunicationOracle& oracle);
EssentialReport minimal_essential_sets(const PlatformConfig& universe, std::size_t depth,
                                       std::size_t node_budget = default_node_budget());

enum class PlatformClass { centralised, decentralised, federated, grassroots, unclassified };
const char* to_string(PlatformClass c);

struct ClassReport {
    PlatformKind kind{};
    std::vector<EssentialReport> universes;
    PlatformClass verdict = PlatformClass::unclassified;
    std::map<PlatformClass, bool> predicates;  // which class patterns matched

    bool exact() const;
};

/// Default universe family (at least three sizes) per platform.
std::vector<PlatformConfig> default_family(PlatformKind kind);

ClassReport classify(PlatformKind kind, const std::vector<PlatformConfig>& family, std::size_t depth,
                     std::size_t node_budget = default_node_budget());

nlohmann::ordered_json to_json(const EssentialReport& r);
nlohmann::ordered_json to_json(const ClassReport& r);

}  // namespace mats
