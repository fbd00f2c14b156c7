#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mllmn/common/types.hpp"
#include "mllmn/scenario/scenario.hpp"

namespace mllmn::responders {

/// One agent's proposed allocation. claimed_defense is carried but never
/// trusted; consensus nodes re-evaluate allocations themselves.
struct ResponseCandidate {
  NodeId proposer;
  scenario::PowerAllocation allocation;
  double claimed_defense = 0.0;
  Digest candidate_hash{};
  std::optional<std::string> raw_text;

  friend bool operator==(const ResponseCandidate&, const ResponseCandidate&) = default;
};

/// Canonical encoding: version byte, proposer (u32), count (u32), powers as
/// integer milliwatts (i64), claimed defense in parts per million (i64). All
/// big-endian. raw_text is not part of the encoding.
std::vector<std::uint8_t> canonical_encoding(const ResponseCandidate& c);

/// Builds a candidate with its hash filled in.
ResponseCandidate make_candidate(NodeId proposer, scenario::PowerAllocation allocation, double claimed_defense,
                                 std::optional<std::string> raw_text = std::nullopt);

bool hash_matches(const ResponseCandidate& c);

/// Inverse of canonical_encoding; powers come back at milliwatt resolution.
/// Throws Error(parse_error) on malformed input.
ResponseCandidate decode_candidate(std::span<const std::uint8_t> bytes);

}  // namespace mllmn::responders
