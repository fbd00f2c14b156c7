#include "mllmn/ledger/block.hpp"

#include <fmt/format.h>

#include "mllmn/common/digest.hpp"
#include "mllmn/common/encoding.hpp"
#include "mllmn/common/error.hpp"
#include "mllmn/consensus/consensus.hpp"

namespace mllmn::ledger {

namespace {
constexpr std::uint8_t kPayloadVersion = 1;
}

std::vector<std::uint8_t> encode_payload(const consensus::ConsensusOutcome& o) {
  ByteWriter w;
  w.u8(kPayloadVersion);
  w.u8(static_cast<std::uint8_t>(o.protocol));
  w.u64(o.round);
  w.u32(static_cast<std::uint32_t>(o.quorum));
  const auto winner = responders::canonical_encoding(o.winner);
  w.u32(static_cast<std::uint32_t>(winner.size()));
  w.bytes(winner);
  w.u32(static_cast<std::uint32_t>(o.votes.size()));
  for (const auto& v : o.votes) {
    w.u32(v.voter.index);
    w.digest(v.candidate_hash);
    w.u64(v.round);
    w.u32(static_cast<std::uint32_t>(v.signature.size()));
    w.bytes(v.signature);
  }
  return std::move(w).take();
}

PayloadView decode_payload(const std::vector<std::uint8_t>& payload) {
  ByteReader r(payload);
  if (r.u8() != kPayloadVersion) throw Error(Errc::parse_error, "unknown payload version");
  PayloadView p;
  const auto proto = r.u8();
  if (proto > static_cast<std::uint8_t>(consensus::Protocol::VAAP)) throw Error(Errc::parse_error, "unknown protocol");
  p.protocol = static_cast<consensus::Protocol>(proto);
  p.round = r.u64();
  p.quorum = r.u32();
  p.winner_encoding = r.bytes(r.u32());
  p.winner = responders::decode_candidate(p.winner_encoding);
  const auto count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    consensus::Vote v;
    v.voter = NodeId{r.u32()};
    v.candidate_hash = r.digest();
    v.round = r.u64();
    v.signature = r.bytes(r.u32());
    p.votes.push_back(std::move(v));
  }
  if (!r.done()) throw Error(Errc::parse_error, "trailing bytes after payload");
  return p;
}

Digest compute_block_hash(const Block& b) {
  ByteWriter w;
  w.u64(b.index);
  w.u64(b.timestamp_us);
  w.digest(b.prev_hash);
  w.digest(b.outcome_hash);
  w.bytes(b.payload);
  return sha256(w.data());
}

Block create_block(const consensus::ConsensusOutcome& outcome, const std::optional<Block>& prev,
                   std::uint64_t now_us) {
  if (!consensus::certificate_valid(outcome))
    throw Error(Errc::refused, fmt::format("round {}: outcome lacks a valid quorum certificate", outcome.round));
  if (prev && now_us < prev->timestamp_us)
    throw Error(Errc::invalid_argument,
                fmt::format("timestamp {} us precedes previous block's {} us", now_us, prev->timestamp_us));
  Block b;
  b.index = prev ? prev->index + 1 : 0;
  b.timestamp_us = now_us;
  b.prev_hash = prev ? prev->block_hash : kZeroDigest;
  b.outcome_hash = sha256(responders::canonical_encoding(outcome.winner));
  b.payload = encode_payload(outcome);
  b.block_hash = compute_block_hash(b);
  return b;
}

}  // namespace mllmn::ledger
