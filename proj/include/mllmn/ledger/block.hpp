#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mllmn/consensus/types.hpp"

namespace mllmn::ledger {

/// One committed round. Timestamps are simulation microseconds.
struct Block {
  std::uint64_t index = 0;
  std::uint64_t timestamp_us = 0;
  Digest prev_hash{};
  Digest outcome_hash{};  // SHA-256 of the winner's canonical encoding
  std::vector<std::uint8_t> payload;
  Digest block_hash{};

  friend bool operator==(const Block&, const Block&) = default;
};

/// version u8 | protocol u8 | round u64 | quorum u32 | winner length u32 |
/// winner encoding | vote count u32 | per vote: voter u32, hash, round u64,
/// signature length u32, signature. Big-endian throughout.
std::vector<std::uint8_t> encode_payload(const consensus::ConsensusOutcome& outcome);

/// The parts of an outcome the payload carries.
struct PayloadView {
  consensus::Protocol protocol = consensus::Protocol::PBFT;
  std::uint64_t round = 0;
  std::size_t quorum = 0;
  std::vector<std::uint8_t> winner_encoding;
  responders::ResponseCandidate winner;
  std::vector<consensus::Vote> votes;
};

/// Throws Error(parse_error) on malformed bytes.
PayloadView decode_payload(const std::vector<std::uint8_t>& payload);

/// SHA-256(index u64 | timestamp_us u64 | prev_hash | outcome_hash | payload)
Digest compute_block_hash(const Block& b);

/// Packages a committed outcome. Throws Error(refused) unless the outcome
/// carries a valid quorum certificate, and Error(invalid_argument) if the
/// timestamp precedes prev's.
Block create_block(const consensus::ConsensusOutcome& outcome, const std::optional<Block>& prev,
                   std::uint64_t now_us);

}  // namespace mllmn::ledger
