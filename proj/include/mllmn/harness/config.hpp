#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mllmn/consensus/types.hpp"
#include "mllmn/netsim/netsim.hpp"
#include "mllmn/responders/responder.hpp"
#include "mllmn/scenario/scenario.hpp"

namespace mllmn::harness {

struct Sweep {
  std::string parameter = "reliability_target";  // or "per_attempt_success"
  std::vector<double> values{0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::size_t trials = 100;
  consensus::ConsensusConfig consensus;
  netsim::NetworkConfig network;
  scenario::ScenarioOverrides scenario_overrides;
  std::vector<responders::ResponderProfile> responder_profiles;
  Sweep sweep;
  consensus::AdversaryStrategy adversary_strategy = consensus::AdversaryStrategy::SelfPromotion;
  double single_noise_sigma = 0.6;  // the one-responder baseline
  std::size_t history_length = 5;
  responders::RemoteOptions remote;

  /// Throws Error(validation_error) with a field-level message.
  void validate() const;
  /// Nodes whose profile is MALICIOUS_INVERSE; they vote adversarially.
  std::vector<NodeId> byzantine_nodes() const;
};

/// n-2 NEAR_OPTIMAL responders with noise 0.02..0.25 followed by two
/// MALICIOUS_INVERSE responders (fewer when f < 2).
std::vector<responders::ResponderProfile> default_profiles(std::size_t n, std::size_t f);

ExperimentConfig default_config();

/// Missing keys take defaults; unknown keys are rejected. An empty document
/// (or empty file) yields default_config(). Throws Error(validation_error).
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace mllmn::harness
