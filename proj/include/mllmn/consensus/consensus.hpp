#pragma once

#include <json.hpp>

#include "mllmn/consensus/abc.hpp"
#include "mllmn/consensus/trust.hpp"
#include "mllmn/consensus/types.hpp"

namespace mllmn::consensus {

/// Pre-prepare / prepare / commit on all n nodes with round-robin view change.
/// Honest nodes prepare only the candidate they themselves rank best; a node
/// commits once it holds a quorum of matching commits. Throws Error(no_quorum)
/// when the view-change budget runs out.
ConsensusOutcome run_pbft(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net);

/// PBFT inside the k highest-trust nodes, then one certificate message to each
/// of the n-k others.
ConsensusOutcome run_tpbft(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net,
                           const TrustState& trust);

/// PBFT inside a bee-colony-selected committee of m nodes, then dissemination.
ConsensusOutcome run_abcpbft(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net,
                             const TrustState& trust);

/// Proposal, signed vote, and aggregated proof phases; commits on a strict
/// majority.
ConsensusOutcome run_vaap(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net);

/// Dispatches on cfg.protocol.
ConsensusOutcome run_consensus(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net,
                               const TrustState& trust);

/// Quorum certificate check: distinct voters, valid signatures, all for the
/// winner, count >= quorum, and the winner's hash recomputes.
bool certificate_valid(const ConsensusOutcome& outcome);

nlohmann::json to_json(const ConsensusOutcome& outcome);

}  // namespace mllmn::consensus
