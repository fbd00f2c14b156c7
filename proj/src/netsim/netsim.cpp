#include "mllmn/netsim/netsim.hpp"

#include <cmath>
#include <fmt/format.h>

#include "mllmn/common/error.hpp"

namespace mllmn::netsim {

namespace {

bool meets_target(double miss, std::uint64_t k, double target) {
  return 1.0 - std::pow(miss, static_cast<double>(k)) >= target;
}

}  // namespace

void NetworkConfig::validate() const {
  if (!(bandwidth_hz > 0.0)) throw Error(Errc::invalid_config, "network.bandwidth_hz must be > 0");
  if (!(channel_rate_bps > 0.0))
    throw Error(Errc::invalid_config, "network.channel_rate_bps must be > 0");
  if (!(transmission_rate_bps > 0.0))
    throw Error(Errc::invalid_config, "network.transmission_rate_bps must be > 0");
  if (!(per_attempt_success > 0.0 && per_attempt_success <= 1.0))
    throw Error(Errc::invalid_config, "network.per_attempt_success must be in (0, 1]");
  if (reliability_target >= 1.0)
    throw Error(Errc::unreachable_reliability,
                fmt::format("network.reliability_target {} is unreachable (must be < 1)",
                            reliability_target));
  if (!(reliability_target >= 0.0))
    throw Error(Errc::invalid_config, "network.reliability_target must be >= 0");
}

std::uint32_t required_attempts(double per_attempt_success, double reliability_target) {
  if (!(per_attempt_success > 0.0 && per_attempt_success <= 1.0))
    throw Error(Errc::invalid_argument, "per_attempt_success must be in (0, 1]");
  if (reliability_target >= 1.0)
    throw Error(Errc::unreachable_reliability, "reliability target >= 1 cannot be reached");
  if (per_attempt_success == 1.0 || reliability_target <= per_attempt_success) return 1;

  const double miss = 1.0 - per_attempt_success;
  // Closed-form estimate, then settle on the exact boundary of the predicate.
  double estimate = std::ceil(std::log1p(-reliability_target) / std::log1p(-per_attempt_success));
  auto k = static_cast<std::uint64_t>(std::max(1.0, estimate));
  while (k > 1 && meets_target(miss, k - 1, reliability_target)) --k;
  while (!meets_target(miss, k, reliability_target)) ++k;
  if (k > UINT32_MAX) throw Error(Errc::unreachable_reliability, "attempt count overflow");
  return static_cast<std::uint32_t>(k);
}

DeliveryReport message_latency(const Message& msg, const NetworkConfig& cfg) {
  cfg.validate();
  if (msg.size_bits == 0) throw Error(Errc::invalid_argument, "message size_bits must be >= 1");
  DeliveryReport report;
  report.attempts = required_attempts(cfg.per_attempt_success, cfg.reliability_target);
  report.latency_s = report.attempts * static_cast<double>(msg.size_bits) / cfg.transmission_rate_bps;
  return report;
}

double phase_latency(std::span<const Message> messages, const NetworkConfig& cfg) {
  if (messages.empty()) throw Error(Errc::empty_phase, "phase has no messages");
  cfg.validate();
  std::uint64_t bits = 0;
  for (const auto& m : messages) {
    if (m.phase_tag != messages.front().phase_tag)
      throw Error(Errc::invalid_argument,
                  fmt::format("mixed phase tags '{}' and '{}'", messages.front().phase_tag, m.phase_tag));
    if (m.size_bits == 0) throw Error(Errc::invalid_argument, "message size_bits must be >= 1");
    bits += m.size_bits;
  }
  const auto attempts = required_attempts(cfg.per_attempt_success, cfg.reliability_target);
  return attempts * static_cast<double>(bits) / cfg.channel_rate_bps;
}

}  // namespace mllmn::netsim
