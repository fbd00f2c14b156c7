#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mllmn/responders/candidate.hpp"
#include "mllmn/responders/prompt.hpp"
#include "mllmn/scenario/attack_model.hpp"

namespace mllmn::responders {

enum class ResponderKind { NearOptimal, Proportional, Uniform, Random, MaliciousInverse, Remote };

std::string_view to_string(ResponderKind kind) noexcept;
std::optional<ResponderKind> parse_responder_kind(std::string_view name) noexcept;

/// Scripted stand-in for one hosted agent.
struct ResponderProfile {
  NodeId id;
  ResponderKind kind = ResponderKind::NearOptimal;
  double noise_sigma = 0.0;  // relative, in [0, 1]
  std::uint64_t seed = 0;
  std::string endpoint;  // REMOTE only

  void validate() const;
};

/// Per-scenario data shared by every responder: assignment and the optimum.
struct ScenarioContext {
  const scenario::WirelessScenario* scenario = nullptr;
  scenario::AttackAssignment assignment;
  scenario::PowerAllocation optimum;

  static ScenarioContext build(const scenario::WirelessScenario& s);
  double evaluate(const scenario::PowerAllocation& alloc) const;
};

/// Allocation for scripted kinds:
///   NEAR_OPTIMAL       optimum * N(1, sigma^2) per station (clamped at 0), renormalized
///   PROPORTIONAL       p_i proportional to d_i^alpha
///   UNIFORM            p_total / n
///   RANDOM             Dirichlet(1,...,1) * p_total
///   MALICIOUS_INVERSE  all power on the least effective station, claims 99%
/// Deterministic in (profile.seed, scenario.seed). REMOTE is rejected here;
/// use propose_all.
ResponseCandidate propose(const ResponderProfile& profile, const ScenarioContext& ctx);
ResponseCandidate propose(const ResponderProfile& profile, const scenario::WirelessScenario& s);

struct RemoteOptions {
  double timeout_s = 30.0;
  std::size_t max_in_flight = 4;
  std::size_t history_length = 5;
};

struct ProposalResult {
  ResponseCandidate candidate;
  std::optional<std::string> failure;  // set when a REMOTE call fell back to UNIFORM
};

/// Proposals for every profile, in NodeId order. Remote calls run
/// concurrently (bounded by max_in_flight); any remote failure substitutes a
/// UNIFORM candidate and records the reason.
std::vector<ProposalResult> propose_all(std::span<const ResponderProfile> profiles, const ScenarioContext& ctx,
                                        std::span<const PromptRecord> history, const RemoteOptions& options = {});

}  // namespace mllmn::responders
