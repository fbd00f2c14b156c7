#include <algorithm>
#include <fmt/format.h>
#include <map>

#include "engine.hpp"
#include "mllmn/common/error.hpp"
#include "mllmn/common/rng.hpp"

namespace mllmn::consensus {
namespace detail {

namespace {

enum Phase : int { kPrePrepare = 0, kPrepare = 1, kCommit = 2 };

std::size_t index_of(const std::vector<ResponseCandidate>& cands, const Digest& h) {
  for (std::size_t c = 0; c < cands.size(); ++c)
    if (cands[c].candidate_hash == h) return c;
  return 0;
}

}  // namespace

Board::Board(const RoundInput& in, std::vector<NodeId> participants)
    : in_(in), participants_(std::move(participants)) {
  const auto& cands = in.candidates;
  for (NodeId id : participants_) {
    byzantine_.push_back(in.policy.is_byzantine(id));
    std::map<Digest, double> scores;
    for (const auto& c : cands) scores.emplace(c.candidate_hash, in.evaluator(id, c));
    best_.push_back(index_of(cands, honest_vote(scores)));

    // worst: argmin, ties to the smallest hash (map order)
    auto worst = scores.begin();
    for (auto it = scores.begin(); it != scores.end(); ++it)
      if (it->second < worst->second) worst = it;
    std::size_t target = index_of(cands, worst->first);
    if (in.policy.strategy == AdversaryStrategy::SelfPromotion) {
      for (std::size_t c = 0; c < cands.size(); ++c)
        if (cands[c].proposer == id) {
          target = c;
          break;
        }
    }
    target_.push_back(target);
  }
}

std::optional<std::size_t> Board::byzantine_choice(std::size_t sender, std::size_t recipient, int phase,
                                                   std::size_t view) const {
  switch (in_.policy.strategy) {
    case AdversaryStrategy::Abstain:
      return std::nullopt;
    case AdversaryStrategy::WorstCandidate:
    case AdversaryStrategy::SelfPromotion:
      return target_[sender];
    case AdversaryStrategy::Equivocate:
      return best_[recipient];
    case AdversaryStrategy::Random: {
      std::uint64_t s = mix_seeds(in_.policy.seed, in_.round);
      s = mix_seeds(s, view);
      s = mix_seeds(s, static_cast<std::uint64_t>(phase));
      s = mix_seeds(s, participants_[sender].index);
      s = mix_seeds(s, participants_[recipient].index);
      return Rng(s).index(in_.candidates.size());
    }
  }
  return std::nullopt;
}

void Transcript::send(NodeId from, std::optional<NodeId> to, std::uint64_t bits) {
  pending_.push_back(netsim::Message{from, to, "", bits});
}

void Transcript::close_phase(const std::string& tag) {
  if (pending_.empty()) return;
  for (auto& m : pending_) m.phase_tag = tag;
  PhaseRecord rec;
  rec.tag = tag;
  rec.messages = pending_.size();
  for (const auto& m : pending_) rec.bits += m.size_bits;
  rec.attempts = netsim::required_attempts(net_.per_attempt_success, net_.reliability_target);
  rec.latency_s = netsim::phase_latency(pending_, net_);
  phases_.push_back(std::move(rec));
  pending_.clear();
}

void Transcript::write_to(ConsensusOutcome& out) const {
  out.phases = phases_;
  out.message_count = 0;
  out.total_bits = 0;
  out.latency_s = 0.0;
  for (const auto& p : phases_) {
    out.message_count += p.messages;
    out.total_bits += p.bits;
    out.latency_s += p.latency_s;
  }
}

std::size_t view_budget(const ConsensusConfig& cfg, std::size_t group_size) {
  return cfg.view_change_budget > 0 ? cfg.view_change_budget : group_size;
}

void require_candidates(const RoundInput& in, const ConsensusConfig& cfg) {
  cfg.validate();
  if (in.candidates.empty()) throw Error(Errc::empty_input, "consensus round has no candidates");
  if (!in.evaluator) throw Error(Errc::invalid_argument, "consensus round has no evaluator");
}

GroupResult run_pbft_group(const RoundInput& in, const ConsensusConfig& cfg,
                           std::vector<NodeId> participants, std::size_t f, Transcript& tx) {
  const Board board(in, std::move(participants));
  const std::size_t N = board.size();
  const std::size_t q = pbft_quorum(N, f);
  const std::uint64_t bits = cfg.base_msg_bits;
  using Slot = std::optional<std::size_t>;

  const std::size_t budget = view_budget(cfg, N);
  for (std::size_t v = 0; v < budget; ++v) {
    const std::size_t L = static_cast<std::size_t>((in.round + v) % N);

    // pre-prepare
    std::vector<Slot> proposal(N);
    for (std::size_t r = 0; r < N; ++r) {
      if (r == L) continue;
      proposal[r] = board.honest(L) ? Slot(board.best(L)) : board.byzantine_choice(L, r, kPrePrepare, v);
      if (proposal[r]) tx.send(board.node(L), board.node(r), bits);
    }
    if (board.honest(L)) proposal[L] = board.best(L);
    tx.close_phase(fmt::format("v{}/pre-prepare", v));

    // prepare (backups only); sent[j][r] is what j told r
    std::vector<std::vector<Slot>> prep(N, std::vector<Slot>(N));
    for (std::size_t j = 0; j < N; ++j) {
      if (j == L) continue;
      for (std::size_t r = 0; r < N; ++r) {
        if (r == j) continue;
        Slot val;
        if (board.honest(j)) {
          if (proposal[j] && *proposal[j] == board.best(j)) val = proposal[j];
        } else {
          val = board.byzantine_choice(j, r, kPrepare, v);
        }
        if (val) {
          prep[j][r] = val;
          tx.send(board.node(j), board.node(r), bits);
        }
      }
    }
    tx.close_phase(fmt::format("v{}/prepare", v));

    std::vector<Slot> prepared(N);
    for (std::size_t i = 0; i < N; ++i) {
      if (!board.honest(i) || !proposal[i] || *proposal[i] != board.best(i)) continue;
      const std::size_t x = *proposal[i];
      std::size_t support = 1;  // the leader's pre-prepare (or the leader itself)
      for (std::size_t j = 0; j < N; ++j) {
        if (j == L) continue;
        if (j == i || prep[j][i] == Slot(x)) ++support;
      }
      if (support >= q) prepared[i] = x;
    }

    // commit
    std::vector<std::vector<Slot>> com(N, std::vector<Slot>(N));
    for (std::size_t j = 0; j < N; ++j) {
      for (std::size_t r = 0; r < N; ++r) {
        if (r == j) continue;
        Slot val = board.honest(j) ? prepared[j] : board.byzantine_choice(j, r, kCommit, v);
        if (val) {
          com[j][r] = val;
          tx.send(board.node(j), board.node(r), bits);
        }
      }
    }
    tx.close_phase(fmt::format("v{}/commit", v));

    std::vector<Slot> committed(N);
    for (std::size_t i = 0; i < N; ++i) {
      if (!prepared[i]) continue;
      std::size_t count = 1;
      for (std::size_t j = 0; j < N; ++j)
        if (j != i && com[j][i] == prepared[i]) ++count;
      if (count >= q) committed[i] = prepared[i];
    }

    const auto first = std::find_if(committed.begin(), committed.end(), [](const Slot& s) { return s.has_value(); });
    if (first == committed.end()) {
      for (std::size_t i = 0; i < N; ++i) {
        if (!board.honest(i)) continue;
        for (std::size_t r = 0; r < N; ++r)
          if (r != i) tx.send(board.node(i), board.node(r), bits);
      }
      tx.close_phase(fmt::format("v{}/view-change", v));
      continue;
    }

    const std::size_t rep = static_cast<std::size_t>(first - committed.begin());
    const std::size_t x = **first;
    GroupResult res;
    res.reporter = board.node(rep);
    auto& out = res.outcome;
    out.round = in.round;
    out.winner = board.candidate(x);
    out.quorum = q;
    out.view = v;
    out.leader = board.node(L);
    out.committee = board.participants();
    out.decisions.assign(cfg.n, std::nullopt);
    out.observed_votes.assign(cfg.n, std::nullopt);
    for (std::size_t j = 0; j < N; ++j) {
      const Slot seen = j == rep ? Slot(x) : com[j][rep];
      if (seen) out.observed_votes[board.node(j).index] = board.hash(*seen);
      if (seen == Slot(x)) out.votes.push_back(sign_vote(board.node(j), board.hash(x), in.round));
      if (board.honest(j)) {
        // local commit if any, otherwise adopt from the certificate
        out.decisions[board.node(j).index] = board.hash(committed[j] ? *committed[j] : x);
      }
    }
    return res;
  }
  throw Error(Errc::no_quorum,
              fmt::format("round {}: no commit after {} view(s) (group of {}, quorum {})", in.round, budget, N, q));
}

}  // namespace detail

ConsensusOutcome run_pbft(const RoundInput& in, const ConsensusConfig& cfg, const netsim::NetworkConfig& net) {
  detail::require_candidates(in, cfg);
  std::vector<NodeId> all;
  for (std::size_t i = 0; i < cfg.n; ++i) all.emplace_back(static_cast<std::uint32_t>(i));
  detail::Transcript tx(net);
  auto res = detail::run_pbft_group(in, cfg, std::move(all), cfg.f, tx);
  res.outcome.protocol = Protocol::PBFT;
  tx.write_to(res.outcome);
  return res.outcome;
}

}  // namespace mllmn::consensus
