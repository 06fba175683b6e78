#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "mats/sim/simulator.hpp"

namespace mats {

/// Abandonment counts by burial depth (blocks stacked above the abandoned
/// block in the chain being given up). Each block counts once, at its first
/// abandonment.
struct ReorgHistogram {
    std::size_t trials = 0;
    std::size_t blocks_produced = 0;
    std::size_t reorg_events = 0;
    std::map<std::size_t, std::size_t> abandoned;

    std::size_t count(std::size_t depth) const;
    double frequency(std::size_t depth) const;
    /// Wilson 95% interval for frequency(depth).
    std::pair<double, double> interval(std::size_t depth) const;
    /// False only if frequency(depth + 1) exceeds frequency(depth) by more than
    /// the 95% two-proportion margin.
    bool non_increasing_at(std::size_t depth) const;

    void merge(const ReorgHistogram& other);
};

/// Reorgs observed along one trace.
ReorgHistogram observe_reorgs(const Trace& trace);

/// `trials` independent runs; trial i uses seed mix_seed(policy.seed, i).
ReorgHistogram reorg_depth_histogram(const PlatformConfig& universe, const Policy& policy,
                                     std::size_t trials);

}  // namespace mats
