#include <algorithm>
#include <fmt/format.h>

#include "engine.hpp"
#include "mllmn/common/error.hpp"
#include "mllmn/common/rng.hpp"

namespace mllmn::consensus {

namespace {

/// PBFT inside `committee`, then the reporter forwards the commit
/// certificate to each non-member, which adopts the winner once it verifies.
ConsensusOutcome run_committee(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net,
                               std::vector<NodeId> committee, Protocol protocol) {
  detail::Transcript tx(net);
  const std::size_t f = group_fault_tolerance(committee.size());
  auto res = detail::run_pbft_group(in, cfg, committee, f, tx);
  auto& out = res.outcome;
  out.protocol = protocol;

  const bool cert_ok = certificate_valid(out);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const NodeId id(static_cast<std::uint32_t>(i));
    if (std::binary_search(committee.begin(), committee.end(), id)) continue;
    tx.send(res.reporter, id, cfg.base_msg_bits);
    if (cert_ok && !in.policy.is_byzantine(id)) out.decisions[i] = out.winner.candidate_hash;
  }
  tx.close_phase("disseminate");
  tx.write_to(out);
  return out;
}

void require_trust(const TrustState& trust, const ConsensusConfig& cfg) {
  if (trust.size() != cfg.n)
    throw Error(Errc::invalid_argument,
                fmt::format("trust state covers {} nodes but consensus.n is {}", trust.size(), cfg.n));
}

}  // namespace

ConsensusOutcome run_tpbft(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net,
                           const TrustState& trust) {
  detail::require_candidates(in, cfg);
  require_trust(trust, cfg);
  return run_committee(in, cfg, net, top_k_by_trust(trust.global_trust, cfg.tpbft_committee_size), Protocol::TPBFT);
}

ConsensusOutcome run_abcpbft(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net,
                             const TrustState& trust) {
  detail::require_candidates(in, cfg);
  require_trust(trust, cfg);
  auto committee = select_committee_abc(trust.global_trust, cfg, mix_seeds(in.seed, in.round));
  return run_committee(in, cfg, net, std::move(committee), Protocol::ABCPBFT);
}

}  // namespace mllmn::consensus
