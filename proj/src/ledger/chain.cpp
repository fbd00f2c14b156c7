#include "mllmn/ledger/chain.hpp"

#include <fmt/format.h>

#include "mllmn/common/digest.hpp"
#include "mllmn/common/error.hpp"
#include "mllmn/ledger/chain_io.hpp"

namespace mllmn::ledger {

namespace {

/// Checks block b at position i against its predecessor (nullptr for genesis).
std::optional<std::string> check_block(const Block& b, const Block* prev, std::size_t i) {
  const Digest& expected_prev = prev ? prev->block_hash : kZeroDigest;
  if (b.prev_hash != expected_prev) return "link-mismatch";
  if (b.index != i) return fmt::format("index-mismatch (expected {}, found {})", i, b.index);
  if (compute_block_hash(b) != b.block_hash) return "hash-mismatch";
  try {
    const auto p = decode_payload(b.payload);
    if (sha256(p.winner_encoding) != b.outcome_hash) return "outcome-hash-mismatch";
  } catch (const Error& e) {
    return fmt::format("payload-invalid ({})", e.what());
  }
  if (prev && b.timestamp_us < prev->timestamp_us) return "timestamp-regression";
  return std::nullopt;
}

}  // namespace

VerifyResult verify_chain(std::span<const Block> blocks) {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (auto why = check_block(blocks[i], i ? &blocks[i - 1] : nullptr, i)) return VerifyResult::failure(i, *why);
  return VerifyResult::success();
}

std::optional<Block> Chain::tip() const {
  if (blocks_.empty()) return std::nullopt;
  return blocks_.back();
}

void Chain::append(const Block& b) {
  if (auto why = check_block(b, blocks_.empty() ? nullptr : &blocks_.back(), blocks_.size()))
    throw Error(Errc::append_rejected, fmt::format("block {} rejected: {}", b.index, *why));
  blocks_.push_back(b);
}

void ReplicaSet::append(const Block& b) {
  for (auto& r : replicas_) r.append(b);
}

bool ReplicaSet::identical() const {
  if (replicas_.empty()) return true;
  const auto ref = chain_to_jsonl(replicas_.front().blocks());
  for (const auto& r : replicas_)
    if (chain_to_jsonl(r.blocks()) != ref) return false;
  return true;
}

}  // namespace mllmn::ledger
