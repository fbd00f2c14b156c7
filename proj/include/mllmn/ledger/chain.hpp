#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mllmn/ledger/block.hpp"

namespace mllmn::ledger {

struct VerifyResult {
  bool ok = true;
  std::size_t index = 0;  // first offending block (or line)
  std::string reason;

  static VerifyResult success() { return {}; }
  static VerifyResult failure(std::size_t i, std::string why) { return {false, i, std::move(why)}; }
};

/// Checks, per block and in this order: link to the previous block, index,
/// recomputed hash, payload decoding and outcome hash, timestamp order.
/// Reports the first violation.
VerifyResult verify_chain(std::span<const Block> blocks);

/// Append-only chain. Existing blocks are never modified.
class Chain {
 public:
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  std::optional<Block> tip() const;

  /// Throws Error(append_rejected) with the reason when the block does not
  /// extend the tip.
  void append(const Block& b);

 private:
  std::vector<Block> blocks_;
};

/// One chain replica per node; every committed block is appended to all.
class ReplicaSet {
 public:
  explicit ReplicaSet(std::size_t nodes) : replicas_(nodes) {}

  void append(const Block& b);
  const Chain& replica(std::size_t node) const { return replicas_.at(node); }
  std::size_t size() const { return replicas_.size(); }
  /// Byte-wise comparison of the serialized replicas.
  bool identical() const;

 private:
  std::vector<Chain> replicas_;
};

}  // namespace mllmn::ledger
