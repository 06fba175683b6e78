#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace mats {

/// Opaque, totally ordered identity of an agent.
class AgentId {
public:
    AgentId() = default;
    explicit AgentId(std::string name) : name_(std::move(name)) {}

    const std::string& str() const noexcept { return name_; }
    bool empty() const noexcept { return name_.empty(); }

    friend auto operator<=>(const AgentId&, const AgentId&) = default;
    friend bool operator==(const AgentId&, const AgentId&) = default;

private:
    std::string name_;
};

inline std::ostream& operator<<(std::ostream& os, const AgentId& id) { return os << id.str(); }

using AgentSet = std::vector<AgentId>;  // kept sorted and duplicate-free

inline AgentSet make_agent_set(std::initializer_list<const char*> names) {
    AgentSet out;
    for (const char* n : names) out.emplace_back(n);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline void normalise(AgentSet& set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
}

inline bool contains(const AgentSet& set, const AgentId& id) {
    return std::binary_search(set.begin(), set.end(), id);
}

inline bool is_subset(const AgentSet& sub, const AgentSet& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace mats

template <>
struct std::hash<mats::AgentId> {
    std::size_t operator()(const mats::AgentId& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
