#pragma once

// Shared machinery for the protocol state machines. Not part of the public API.

#include <optional>
#include <string>
#include <vector>

#include "mllmn/consensus/consensus.hpp"

namespace mllmn::consensus::detail {

/// Per-round view of the candidates from every participant's perspective.
class Board {
 public:
  Board(const RoundInput& in, std::vector<NodeId> participants);

  std::size_t size() const { return participants_.size(); }
  NodeId node(std::size_t pos) const { return participants_[pos]; }
  const std::vector<NodeId>& participants() const { return participants_; }
  bool honest(std::size_t pos) const { return !byzantine_[pos]; }
  std::size_t best(std::size_t pos) const { return best_[pos]; }
  const ResponseCandidate& candidate(std::size_t c) const { return in_.candidates[c]; }
  const Digest& hash(std::size_t c) const { return in_.candidates[c].candidate_hash; }
  std::uint64_t round() const { return in_.round; }

  /// What a Byzantine participant sends `recipient` (a position) in a phase;
  /// nullopt means it stays silent.
  std::optional<std::size_t> byzantine_choice(std::size_t sender, std::size_t recipient, int phase,
                                              std::size_t view) const;

 private:
  const RoundInput& in_;
  std::vector<NodeId> participants_;
  std::vector<bool> byzantine_;
  std::vector<std::size_t> best_;
  std::vector<std::size_t> target_;
};

/// Records every emitted message per phase and prices it with netsim.
class Transcript {
 public:
  explicit Transcript(const netsim::NetworkConfig& net) : net_(net) {}

  void send(NodeId from, std::optional<NodeId> to, std::uint64_t bits);
  /// Closes the current phase under `tag`; empty phases leave no record.
  void close_phase(const std::string& tag);
  void write_to(ConsensusOutcome& out) const;

 private:
  const netsim::NetworkConfig& net_;
  std::vector<netsim::Message> pending_;
  std::vector<PhaseRecord> phases_;
};

struct GroupResult {
  ConsensusOutcome outcome;
  NodeId reporter{0};  // lowest-index honest node that committed locally
};

/// PBFT over `participants` (sorted), tolerating f faults. Fills every
/// outcome field except protocol-specific extras; decisions cover only the
/// participants. Throws Error(no_quorum).
GroupResult run_pbft_group(const RoundInput& in, const ConsensusConfig& cfg,
                           std::vector<NodeId> participants, std::size_t f, Transcript& transcript);

std::size_t view_budget(const ConsensusConfig& cfg, std::size_t group_size);

void require_candidates(const RoundInput& in, const ConsensusConfig& cfg);

}  // namespace mllmn::consensus::detail
