#include <algorithm>
#include <fmt/format.h>

#include "engine.hpp"
#include "mllmn/common/error.hpp"

namespace mllmn::consensus {

namespace {
enum Phase : int { kProposal = 0, kVote = 1, kProof = 2 };
}

ConsensusOutcome run_vaap(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net) {
  detail::require_candidates(in, cfg);
  std::vector<NodeId> all;
  for (std::size_t i = 0; i < cfg.n; ++i) all.emplace_back(static_cast<std::uint32_t>(i));
  const detail::Board board(in, std::move(all));
  detail::Transcript tx(net);
  const std::size_t N = board.size();
  const std::size_t q = vaap_quorum(N);
  const std::uint64_t base = cfg.base_msg_bits;
  const std::uint64_t vote_bits = base + cfg.signature_bits;
  const std::uint64_t proof_bits = base + N * cfg.signature_bits;
  using Slot = std::optional<std::size_t>;

  const std::size_t budget = detail::view_budget(cfg, N);
  for (std::size_t v = 0; v < budget; ++v) {
    const std::size_t L = static_cast<std::size_t>((in.round + v) % N);
    const bool honest_leader = board.honest(L);

    std::vector<Slot> proposal(N);
    for (std::size_t r = 0; r < N; ++r) {
      if (r == L) continue;
      proposal[r] = honest_leader ? Slot(board.best(L)) : board.byzantine_choice(L, r, kProposal, v);
      if (proposal[r]) tx.send(board.node(L), board.node(r), base);
    }
    tx.close_phase(fmt::format("v{}/proposal", v));

    // Each voter signs the candidate it ranks best (honest) or its adversarial pick.
    std::vector<Slot> ballot(N);
    ballot[L] = honest_leader ? Slot(board.best(L)) : board.byzantine_choice(L, L, kVote, v);
    for (std::size_t j = 0; j < N; ++j) {
      if (j == L) continue;
      ballot[j] = board.honest(j) ? (proposal[j] ? Slot(board.best(j)) : Slot()) : board.byzantine_choice(j, L, kVote, v);
      if (ballot[j]) tx.send(board.node(j), board.node(L), vote_bits);
    }
    tx.close_phase(fmt::format("v{}/vote", v));

    VoteTally tally;
    for (std::size_t j = 0; j < N; ++j)
      if (ballot[j]) tally.add(sign_vote(board.node(j), board.hash(*ballot[j]), in.round));

    // Values the leader can prove, most votes first.
    std::vector<std::size_t> provable;
    if (honest_leader) {
      if (tally.count(board.hash(board.best(L))) >= q) provable.push_back(board.best(L));
    } else if (in.policy.strategy != AdversaryStrategy::Abstain) {
      for (std::size_t c = 0; c < in.candidates.size(); ++c) {
        const bool dup = std::any_of(provable.begin(), provable.end(),
                                     [&](std::size_t p) { return board.hash(p) == board.hash(c); });
        if (!dup && tally.count(board.hash(c)) >= q) provable.push_back(c);
      }
      std::stable_sort(provable.begin(), provable.end(), [&](std::size_t a, std::size_t b) {
        return tally.count(board.hash(a)) > tally.count(board.hash(b));
      });
    }

    std::vector<Slot> decided(N);
    if (!provable.empty()) {
      if (honest_leader) decided[L] = provable.front();
      for (std::size_t r = 0; r < N; ++r) {
        if (r == L) continue;
        const std::size_t x = provable[r % provable.size()];  // a Byzantine leader may split proofs
        tx.send(board.node(L), board.node(r), proof_bits);
        if (board.honest(r) && tally.count(board.hash(x)) >= q) decided[r] = x;
      }
    }
    tx.close_phase(fmt::format("v{}/proof", v));

    const auto first = std::find_if(decided.begin(), decided.end(), [](const Slot& s) { return s.has_value(); });
    if (first == decided.end()) {
      for (std::size_t i = 0; i < N; ++i) {
        if (!board.honest(i)) continue;
        for (std::size_t r = 0; r < N; ++r)
          if (r != i) tx.send(board.node(i), board.node(r), base);
      }
      tx.close_phase(fmt::format("v{}/view-change", v));
      continue;
    }

    const std::size_t x = **first;
    ConsensusOutcome out;
    out.protocol = Protocol::VAAP;
    out.round = in.round;
    out.winner = board.candidate(x);
    out.votes = tally.votes_for(board.hash(x));
    out.quorum = q;
    out.view = v;
    out.leader = board.node(L);
    out.committee = board.participants();
    out.decisions.assign(N, std::nullopt);
    out.observed_votes.assign(N, std::nullopt);
    for (std::size_t j = 0; j < N; ++j) {
      if (ballot[j]) out.observed_votes[j] = board.hash(*ballot[j]);
      if (board.honest(j)) out.decisions[j] = board.hash(decided[j] ? *decided[j] : x);
    }
    tx.write_to(out);
    return out;
  }
  throw Error(Errc::no_quorum,
              fmt::format("round {}: no majority after {} view(s) (n = {}, quorum {})", in.round, budget, N, q));
}

}  // namespace mllmn::consensus
