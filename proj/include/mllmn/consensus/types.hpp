#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mllmn/common/types.hpp"
#include "mllmn/netsim/netsim.hpp"
#include "mllmn/responders/candidate.hpp"

namespace mllmn::consensus {

using responders::ResponseCandidate;

enum class Protocol { PBFT, TPBFT, ABCPBFT, VAAP };

inline constexpr Protocol kAllProtocols[] = {Protocol::PBFT, Protocol::TPBFT, Protocol::ABCPBFT, Protocol::VAAP};

std::string_view to_string(Protocol p) noexcept;
std::optional<Protocol> parse_protocol(std::string_view name) noexcept;
/// "PBFT, TPBFT, ABCPBFT, VAAP"
std::string protocol_options();

struct AbcParams {
  std::size_t population = 20;
  std::size_t iterations = 50;
  std::size_t scout_limit = 10;
};

struct TrustWeights {
  double w_trust = 1.0;
  double w_bits = 1e-6;
};

struct ConsensusConfig {
  Protocol protocol = Protocol::PBFT;
  std::size_t n = 10;
  std::size_t f = 3;
  std::size_t tpbft_committee_size = 7;
  std::size_t abcpbft_committee_size = 5;
  std::uint64_t base_msg_bits = 2000;
  std::uint64_t signature_bits = 512;
  std::size_t view_change_budget = 0;  // 0: one view per participant
  AbcParams abc;
  TrustWeights trust_weights;

  /// Throws Error(invalid_config) naming the field.
  void validate() const;
  std::size_t committee_size() const;  // for the configured protocol; n for PBFT/VAAP
};

/// Simulated signature: 64 opaque bytes derived from (voter, round, hash).
/// Only the voter's own code path produces it, so a valid signature cannot be
/// attached to somebody else's vote.
struct Vote {
  NodeId voter{0};
  Digest candidate_hash{};
  std::uint64_t round = 0;
  std::vector<std::uint8_t> signature;

  friend bool operator==(const Vote&, const Vote&) = default;
};

inline constexpr std::size_t kSignatureBytes = 64;

Vote sign_vote(NodeId voter, const Digest& candidate_hash, std::uint64_t round);
bool verify_vote(const Vote& v);

/// Collects votes; a second vote from the same voter is rejected.
class VoteTally {
 public:
  bool add(const Vote& v);  // false on duplicate voter
  std::size_t count(const Digest& h) const;
  std::vector<Vote> votes_for(const Digest& h) const;  // ordered by voter
  std::size_t size() const { return by_voter_.size(); }

 private:
  std::map<NodeId, Vote> by_voter_;
};

enum class AdversaryStrategy { WorstCandidate, SelfPromotion, Random, Abstain, Equivocate };

std::string_view to_string(AdversaryStrategy s) noexcept;
std::optional<AdversaryStrategy> parse_adversary_strategy(std::string_view name) noexcept;

/// Which nodes are Byzantine and how they behave. Random means per-recipient
/// equivocation; Abstain means silence; Equivocate backs each recipient's
/// own favourite, the coordinated split attack.
struct VotePolicy {
  std::vector<NodeId> byzantine;
  AdversaryStrategy strategy = AdversaryStrategy::WorstCandidate;
  std::uint64_t seed = 0;

  bool is_byzantine(NodeId id) const;
};

/// A node's own score for a candidate (higher is better).
using Evaluator = std::function<double(NodeId, const ResponseCandidate&)>;

struct RoundInput {
  std::uint64_t round = 0;
  std::uint64_t seed = 0;  // drives committee search
  std::vector<ResponseCandidate> candidates;
  Evaluator evaluator;
  VotePolicy policy;
};

struct PhaseRecord {
  std::string tag;
  std::size_t messages = 0;
  std::uint64_t bits = 0;
  std::uint32_t attempts = 0;
  double latency_s = 0.0;

  friend bool operator==(const PhaseRecord&, const PhaseRecord&) = default;
};

struct ConsensusOutcome {
  Protocol protocol = Protocol::PBFT;
  std::uint64_t round = 0;
  ResponseCandidate winner;
  std::vector<Vote> votes;  // commit certificate, ordered by voter
  std::size_t quorum = 0;
  std::size_t view = 0;
  NodeId leader{0};
  double latency_s = 0.0;
  std::size_t message_count = 0;
  std::uint64_t total_bits = 0;
  std::vector<NodeId> committee;
  std::vector<PhaseRecord> phases;
  /// Final decision per node (nullopt for Byzantine nodes).
  std::vector<std::optional<Digest>> decisions;
  /// Each participant's vote in the deciding view; nullopt when silent or not
  /// a participant.
  std::vector<std::optional<Digest>> observed_votes;

  friend bool operator==(const ConsensusOutcome&, const ConsensusOutcome&) = default;
};

/// nodes[round mod n]
NodeId elect_leader(std::uint64_t round, std::span<const NodeId> nodes);

/// argmax score; ties go to the lexicographically smallest hash.
Digest honest_vote(const std::map<Digest, double>& scores);

/// Byzantine tolerance inside a group of the given size: floor((size-1)/3).
std::size_t group_fault_tolerance(std::size_t size);

/// Matching votes needed in a PBFT group of `size` tolerating `f`:
/// max(2f+1, floor((size+f)/2)+1), which keeps any two quorums overlapping in
/// at least f+1 members.
std::size_t pbft_quorum(std::size_t size, std::size_t f);

/// floor(n/2)+1
std::size_t vaap_quorum(std::size_t n);

std::size_t pbft_message_count(std::size_t n);
std::size_t committee_message_count(std::size_t n, std::size_t k);
std::size_t vaap_message_count(std::size_t n);
std::uint64_t vaap_total_bits(std::size_t n, std::uint64_t base_bits, std::uint64_t sig_bits);
/// Closed-form no-fault message count / bits for the configured protocol.
std::size_t expected_message_count(const ConsensusConfig& cfg);
std::uint64_t expected_total_bits(const ConsensusConfig& cfg);

}  // namespace mllmn::consensus
