#pragma once

#include <cstdint>
#include <vector>

#include "mllmn/consensus/types.hpp"

namespace mllmn::consensus {

/// w_trust * mean(trust of members) - w_bits * (no-fault bits of a committee
/// round of that size).
double committee_fitness(const std::vector<NodeId>& members, const std::vector<double>& global_trust,
                         const ConsensusConfig& cfg);

/// Artificial bee colony over m-subsets (m = cfg.abcpbft_committee_size):
/// employed bees try a one-member swap on their food source, onlookers pick
/// sources by fitness-proportional roulette and do the same, and sources that
/// fail to improve for scout_limit tries are replaced by random subsets.
/// Returns the best subset seen, ordered by index. Throws Error(invalid_config)
/// when m > n.
std::vector<NodeId> select_committee_abc(const std::vector<double>& global_trust, const ConsensusConfig& cfg,
                                         std::uint64_t seed);

}  // namespace mllmn::consensus
