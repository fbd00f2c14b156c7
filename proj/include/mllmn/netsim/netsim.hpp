#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "mllmn/common/types.hpp"

/// Shared-medium broadcast model for the consensus nodes. Latency is purely
/// serialization plus fixed-redundancy retransmission: a sender always emits
/// required_attempts() copies, and every message of a protocol phase shares
/// the broadcast channel. Propagation delay is zero.
namespace mllmn::netsim {

struct NetworkConfig {
  double bandwidth_hz = 80e3;  // carried for completeness; not used by latency
  double channel_rate_bps = 15e3;
  double transmission_rate_bps = 10e3;
  double per_attempt_success = 0.5;
  double reliability_target = 0.90;

  /// Throws Error(invalid_config) or Error(unreachable_reliability).
  void validate() const;
};

struct Message {
  NodeId from;
  std::optional<NodeId> to;  // nullopt = broadcast
  std::string phase_tag;
  std::uint64_t size_bits = 1;
};

struct DeliveryReport {
  std::uint32_t attempts = 1;
  double latency_s = 0.0;
};

/// Smallest k >= 1 with 1 - (1 - p)^k >= target.
std::uint32_t required_attempts(double per_attempt_success, double reliability_target);

DeliveryReport message_latency(const Message& msg, const NetworkConfig& cfg);

/// attempts * (sum of bits) / channel rate. All messages must share a phase tag.
double phase_latency(std::span<const Message> messages, const NetworkConfig& cfg);

}  // namespace mllmn::netsim
