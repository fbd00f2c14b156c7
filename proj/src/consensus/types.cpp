#include "mllmn/consensus/types.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "mllmn/common/digest.hpp"
#include "mllmn/common/encoding.hpp"
#include "mllmn/common/error.hpp"

namespace mllmn::consensus {

namespace {

constexpr std::pair<Protocol, std::string_view> kProtocolNames[] = {
    {Protocol::PBFT, "PBFT"}, {Protocol::TPBFT, "TPBFT"}, {Protocol::ABCPBFT, "ABCPBFT"}, {Protocol::VAAP, "VAAP"}};

constexpr std::pair<AdversaryStrategy, std::string_view> kStrategyNames[] = {
    {AdversaryStrategy::WorstCandidate, "WORST_CANDIDATE"},
    {AdversaryStrategy::SelfPromotion, "SELF_PROMOTION"},
    {AdversaryStrategy::Random, "RANDOM"},
    {AdversaryStrategy::Abstain, "ABSTAIN"},
    {AdversaryStrategy::Equivocate, "EQUIVOCATE"},
};

Digest signature_half(NodeId voter, const Digest& h, std::uint64_t round, std::uint8_t half) {
  ByteWriter w;
  for (char c : std::string_view("mllmn-vote-sig")) w.u8(static_cast<std::uint8_t>(c));
  w.u8(half);
  w.u32(voter.index);
  w.u64(round);
  w.digest(h);
  return sha256(w.data());
}

}  // namespace

std::string_view to_string(Protocol p) noexcept {
  for (const auto& [k, name] : kProtocolNames)
    if (k == p) return name;
  return "UNKNOWN";
}

std::optional<Protocol> parse_protocol(std::string_view name) noexcept {
  for (const auto& [k, n] : kProtocolNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string protocol_options() {
  std::string out;
  for (const auto& [k, n] : kProtocolNames) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

std::string_view to_string(AdversaryStrategy s) noexcept {
  for (const auto& [k, name] : kStrategyNames)
    if (k == s) return name;
  return "UNKNOWN";
}

std::optional<AdversaryStrategy> parse_adversary_strategy(std::string_view name) noexcept {
  for (const auto& [k, n] : kStrategyNames)
    if (n == name) return k;
  return std::nullopt;
}

void ConsensusConfig::validate() const {
  auto bad = [](const std::string& msg) { throw Error(Errc::invalid_config, msg); };
  if (n < 2) bad(fmt::format("consensus.n must be at least 2 (got {})", n));
  if (protocol != Protocol::VAAP && n < 3 * f + 1)
    bad(fmt::format("consensus.n = {} must be at least 3*f+1 = {} for {}", n, 3 * f + 1, to_string(protocol)));
  if (tpbft_committee_size < 1 || tpbft_committee_size > n)
    bad(fmt::format("consensus.tpbft_committee_size = {} must be in [1, n = {}]", tpbft_committee_size, n));
  if (abcpbft_committee_size < 1 || abcpbft_committee_size > n)
    bad(fmt::format("consensus.abcpbft_committee_size = {} must be in [1, n = {}]", abcpbft_committee_size, n));
  if (base_msg_bits < 1) bad("consensus.base_msg_bits must be positive");
  if (signature_bits < 1) bad("consensus.signature_bits must be positive");
  if (abc.population < 2) bad(fmt::format("consensus.abc.population = {} must be at least 2", abc.population));
  if (abc.iterations < 1) bad("consensus.abc.iterations must be at least 1");
  if (abc.scout_limit < 1) bad("consensus.abc.scout_limit must be at least 1");
  if (!(trust_weights.w_trust >= 0.0) || !(trust_weights.w_bits >= 0.0))
    bad("consensus.trust_weights must be non-negative");
}

std::size_t ConsensusConfig::committee_size() const {
  switch (protocol) {
    case Protocol::TPBFT:
      return tpbft_committee_size;
    case Protocol::ABCPBFT:
      return abcpbft_committee_size;
    default:
      return n;
  }
}

Vote sign_vote(NodeId voter, const Digest& candidate_hash, std::uint64_t round) {
  Vote v{voter, candidate_hash, round, {}};
  v.signature.reserve(kSignatureBytes);
  for (std::uint8_t half : {0, 1}) {
    auto d = signature_half(voter, candidate_hash, round, half);
    v.signature.insert(v.signature.end(), d.begin(), d.end());
  }
  return v;
}

bool verify_vote(const Vote& v) {
  return v.signature == sign_vote(v.voter, v.candidate_hash, v.round).signature;
}

bool VoteTally::add(const Vote& v) { return by_voter_.emplace(v.voter, v).second; }

std::size_t VoteTally::count(const Digest& h) const {
  return static_cast<std::size_t>(
      std::count_if(by_voter_.begin(), by_voter_.end(), [&](const auto& kv) { return kv.second.candidate_hash == h; }));
}

std::vector<Vote> VoteTally::votes_for(const Digest& h) const {
  std::vector<Vote> out;
  for (const auto& [id, v] : by_voter_)
    if (v.candidate_hash == h) out.push_back(v);
  return out;
}

bool VotePolicy::is_byzantine(NodeId id) const {
  return std::find(byzantine.begin(), byzantine.end(), id) != byzantine.end();
}

NodeId elect_leader(std::uint64_t round, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw Error(Errc::empty_input, "elect_leader: empty node list");
  return nodes[static_cast<std::size_t>(round % nodes.size())];
}

Digest honest_vote(const std::map<Digest, double>& scores) {
  if (scores.empty()) throw Error(Errc::empty_input, "honest_vote: no candidates to score");
  // std::map iterates in ascending hash order, so strict > keeps the smallest hash on ties.
  auto best = scores.begin();
  for (auto it = std::next(scores.begin()); it != scores.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

std::size_t group_fault_tolerance(std::size_t size) { return size == 0 ? 0 : (size - 1) / 3; }

std::size_t pbft_quorum(std::size_t size, std::size_t f) { return std::max(2 * f + 1, (size + f) / 2 + 1); }

std::size_t vaap_quorum(std::size_t n) { return n / 2 + 1; }

std::size_t pbft_message_count(std::size_t n) { return (n - 1) + (n - 1) * (n - 1) + n * (n - 1); }

std::size_t committee_message_count(std::size_t n, std::size_t k) { return pbft_message_count(k) + (n - k); }

std::size_t vaap_message_count(std::size_t n) { return 3 * (n - 1); }

std::uint64_t vaap_total_bits(std::size_t n, std::uint64_t base_bits, std::uint64_t sig_bits) {
  const std::uint64_t m = n - 1;
  return m * base_bits + m * (base_bits + sig_bits) + m * (base_bits + n * sig_bits);
}

std::size_t expected_message_count(const ConsensusConfig& cfg) {
  switch (cfg.protocol) {
    case Protocol::PBFT:
      return pbft_message_count(cfg.n);
    case Protocol::TPBFT:
    case Protocol::ABCPBFT:
      return committee_message_count(cfg.n, cfg.committee_size());
    case Protocol::VAAP:
      return vaap_message_count(cfg.n);
  }
  return 0;
}

std::uint64_t expected_total_bits(const ConsensusConfig& cfg) {
  if (cfg.protocol == Protocol::VAAP) return vaap_total_bits(cfg.n, cfg.base_msg_bits, cfg.signature_bits);
  return expected_message_count(cfg) * cfg.base_msg_bits;
}

}  // namespace mllmn::consensus
