#include "mllmn/responders/candidate.hpp"

#include <cmath>

#include "mllmn/common/digest.hpp"
#include "mllmn/common/encoding.hpp"
#include "mllmn/common/error.hpp"

namespace mllmn::responders {

namespace {
constexpr std::uint8_t kCandidateVersion = 1;
}

std::vector<std::uint8_t> canonical_encoding(const ResponseCandidate& c) {
  ByteWriter w;
  w.u8(kCandidateVersion);
  w.u32(c.proposer.index);
  w.u32(static_cast<std::uint32_t>(c.allocation.powers_w.size()));
  for (double p : c.allocation.powers_w) w.i64(to_milliwatts(p));
  w.i64(std::llround(c.claimed_defense * 1e6));
  return std::move(w).take();
}

ResponseCandidate make_candidate(NodeId proposer, scenario::PowerAllocation allocation, double claimed_defense,
                                 std::optional<std::string> raw_text) {
  ResponseCandidate c{proposer, std::move(allocation), claimed_defense, {}, std::move(raw_text)};
  c.candidate_hash = sha256(canonical_encoding(c));
  return c;
}

bool hash_matches(const ResponseCandidate& c) { return sha256(canonical_encoding(c)) == c.candidate_hash; }

ResponseCandidate decode_candidate(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u8() != kCandidateVersion) throw Error(Errc::parse_error, "unknown candidate encoding version");
  ResponseCandidate c;
  c.proposer = NodeId{r.u32()};
  const auto n = r.u32();
  if (static_cast<std::size_t>(n) * 8 > r.remaining()) throw Error(Errc::parse_error, "candidate power count overruns encoding");
  c.allocation.powers_w.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) c.allocation.powers_w.push_back(static_cast<double>(r.i64()) / 1000.0);
  c.claimed_defense = static_cast<double>(r.i64()) / 1e6;
  if (!r.done()) throw Error(Errc::parse_error, "trailing bytes after candidate encoding");
  c.candidate_hash = sha256(bytes);
  return c;
}

}  // namespace mllmn::responders
