#include "mllmn/consensus/consensus.hpp"

#include <set>

#include "mllmn/common/digest.hpp"

namespace mllmn::consensus {

ConsensusOutcome run_consensus(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net,
                               const TrustState& trust) {
  switch (cfg.protocol) {
    case Protocol::PBFT:
      return run_pbft(in, cfg, net);
    case Protocol::TPBFT:
      return run_tpbft(in, cfg, net, trust);
    case Protocol::ABCPBFT:
      return run_abcpbft(in, cfg, net, trust);
    case Protocol::VAAP:
      return run_vaap(in, cfg, net);
  }
  return run_pbft(in, cfg, net);
}

bool certificate_valid(const ConsensusOutcome& outcome) {
  if (!responders::hash_matches(outcome.winner)) return false;
  if (outcome.quorum == 0 || outcome.votes.size() < outcome.quorum) return false;
  std::set<NodeId> voters;
  for (const auto& v : outcome.votes) {
    if (v.candidate_hash != outcome.winner.candidate_hash || v.round != outcome.round) return false;
    if (!verify_vote(v) || !voters.insert(v.voter).second) return false;
  }
  return true;
}

nlohmann::json to_json(const ConsensusOutcome& o) {
  nlohmann::json votes = nlohmann::json::array();
  for (const auto& v : o.votes)
    votes.push_back({{"voter", v.voter.index}, {"candidate_hash", to_hex(v.candidate_hash)},
                     {"signature", to_hex(v.signature)}});
  nlohmann::json committee = nlohmann::json::array();
  for (NodeId id : o.committee) committee.push_back(id.index);
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& p : o.phases)
    phases.push_back({{"tag", p.tag}, {"messages", p.messages}, {"bits", p.bits}, {"attempts", p.attempts},
                      {"latency_s", p.latency_s}});
  return {
      {"protocol", to_string(o.protocol)},
      {"round", o.round},
      {"view", o.view},
      {"leader", o.leader.index},
      {"quorum", o.quorum},
      {"winner",
       {{"proposer", o.winner.proposer.index},
        {"powers_w", o.winner.allocation.powers_w},
        {"claimed_defense", o.winner.claimed_defense},
        {"candidate_hash", to_hex(o.winner.candidate_hash)}}},
      {"votes", votes},
      {"committee", committee},
      {"message_count", o.message_count},
      {"total_bits", o.total_bits},
      {"latency_s", o.latency_s},
      {"phases", phases},
  };
}

}  // namespace mllmn::consensus
