#include "mats/sim/reorg.hpp"

#include <cmath>
#include <unordered_set>

namespace mats {

namespace {

constexpr double kZ95 = 1.959963984540054;

ReorgHistogram observe(const Trace& trace, std::unordered_set<std::uint64_t>& seen) {
    ReorgHistogram h;
    for (const auto& step : trace.steps) {
        const Tx& t = step.tx;
        if (t.schema == "AddBlock") {
            ++h.blocks_produced;
            continue;
        }
        if (t.schema != kSync) continue;
        const Chain& before = chain_of(t.before[0]).chain;
        const Chain& after = chain_of(t.after[0]).chain;
        std::size_t keep = before.common_prefix(after);
        if (keep == before.length()) continue;
        ++h.reorg_events;
        auto blocks = before.blocks();
        for (std::size_t i = keep; i < blocks.size(); ++i)
            if (seen.insert(blocks[i]->id).second) ++h.abandoned[blocks.size() - 1 - i];
    }
    return h;
}

}  // namespace

std::size_t ReorgHistogram::count(std::size_t depth) const {
    auto it = abandoned.find(depth);
    return it == abandoned.end() ? 0 : it->second;
}

double ReorgHistogram::frequency(std::size_t depth) const {
    if (blocks_produced == 0) return 0.0;
    return static_cast<double>(count(depth)) / static_cast<double>(blocks_produced);
}

std::pair<double, double> ReorgHistogram::interval(std::size_t depth) const {
    if (blocks_produced == 0) return {0.0, 0.0};
    const double n = static_cast<double>(blocks_produced);
    const double p = frequency(depth);
    const double z2 = kZ95 * kZ95;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = kZ95 * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

bool ReorgHistogram::non_increasing_at(std::size_t depth) const {
    if (blocks_produced == 0) return true;
    const double n = static_cast<double>(blocks_produced);
    const double a = frequency(depth), b = frequency(depth + 1);
    const double margin = kZ95 * std::sqrt((a * (1 - a) + b * (1 - b)) / n);
    return b - a <= margin;
}

void ReorgHistogram::merge(const ReorgHistogram& other) {
    trials += other.trials;
    blocks_produced += other.blocks_produced;
    reorg_events += other.reorg_events;
    for (const auto& [d, n] : other.abandoned) abandoned[d] += n;
}

ReorgHistogram observe_reorgs(const Trace& trace) {
    std::unordered_set<std::uint64_t> seen;
    auto h = observe(trace, seen);
    h.trials = 1;
    return h;
}

ReorgHistogram reorg_depth_histogram(const PlatformConfig& universe, const Policy& policy,
                                     std::size_t trials) {
    if (trials == 0) throw ConfigError("reorg histogram needs at least one trial");
    if (universe.kind != PlatformKind::bitcoin && universe.kind != PlatformKind::decentralised)
        throw ConfigError("reorg statistics need a chain platform");
    ReorgHistogram total;
    for (std::size_t i = 0; i < trials; ++i) {
        Policy p = policy;
        p.seed = mix_seed(policy.seed, i);
        total.merge(observe_reorgs(run_simulation(universe, p)));
    }
    return total;
}

}  // namespace mats
