#include "mllmn/responders/responder.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <future>
#include <limits>
#include <semaphore>

#include "mllmn/common/error.hpp"
#include "mllmn/common/rng.hpp"
#include "mllmn/responders/remote.hpp"
#include "mllmn/scenario/allocation.hpp"

namespace mllmn::responders {

namespace {

constexpr double kMaliciousClaim = 0.99;

struct KindName {
  ResponderKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ResponderKind::NearOptimal, "NEAR_OPTIMAL"},
    {ResponderKind::Proportional, "PROPORTIONAL"},
    {ResponderKind::Uniform, "UNIFORM"},
    {ResponderKind::Random, "RANDOM"},
    {ResponderKind::MaliciousInverse, "MALICIOUS_INVERSE"},
    {ResponderKind::Remote, "REMOTE"},
};

scenario::PowerAllocation scaled_to_budget(std::vector<double> weights, double budget) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (!(sum > 0.0)) return {std::vector<double>(weights.size(), budget / static_cast<double>(weights.size()))};
  for (auto& w : weights) w = w / sum * budget;
  return {std::move(weights)};
}

scenario::PowerAllocation uniform_allocation(const scenario::WirelessScenario& s) {
  return {std::vector<double>(s.n_lbs, s.p_total_w / static_cast<double>(s.n_lbs))};
}

/// Station whose full budget buys the least defense; untargeted stations buy none.
std::size_t least_effective_station(const ScenarioContext& ctx) {
  const auto& s = *ctx.scenario;
  std::vector<double> gain(s.n_lbs, 0.0);
  for (const auto& t : scenario::build_threats(s, ctx.assignment))
    gain[t.lbs] = t.defense(s.p_total_w).value - t.defense(0.0).value;
  return static_cast<std::size_t>(std::min_element(gain.begin(), gain.end()) - gain.begin());
}

ResponseCandidate honest_candidate(NodeId id, scenario::PowerAllocation alloc, const ScenarioContext& ctx) {
  const double defense = ctx.evaluate(alloc);
  return make_candidate(id, std::move(alloc), defense);
}

}  // namespace

std::string_view to_string(ResponderKind kind) noexcept {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "UNKNOWN";
}

std::optional<ResponderKind> parse_responder_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  return std::nullopt;
}

void ResponderProfile::validate() const {
  if (!(noise_sigma >= 0.0 && noise_sigma <= 1.0))
    throw Error(Errc::invalid_config, fmt::format("responder {}: noise_sigma {} must be in [0, 1]", id.index, noise_sigma));
  if (kind == ResponderKind::Remote && endpoint.empty())
    throw Error(Errc::invalid_config, fmt::format("responder {}: REMOTE profile needs an endpoint", id.index));
}

ScenarioContext ScenarioContext::build(const scenario::WirelessScenario& s) {
  ScenarioContext ctx;
  ctx.scenario = &s;
  ctx.assignment = scenario::assign_attackers(s);
  if (ctx.assignment.target_of.empty())
    ctx.optimum = uniform_allocation(s);  // nothing to defend; any split is optimal
  else
    ctx.optimum = scenario::optimal_allocation(s, ctx.assignment);
  return ctx;
}

double ScenarioContext::evaluate(const scenario::PowerAllocation& alloc) const {
  return scenario::average_defense(*scenario, alloc, assignment).average_defense;
}

ResponseCandidate propose(const ResponderProfile& profile, const ScenarioContext& ctx) {
  profile.validate();
  const auto& s = *ctx.scenario;
  Rng rng(mix_seeds(profile.seed, s.seed));

  switch (profile.kind) {
    case ResponderKind::NearOptimal: {
      if (profile.noise_sigma == 0.0) return honest_candidate(profile.id, ctx.optimum, ctx);
      std::vector<double> w(ctx.optimum.powers_w);
      for (auto& p : w) p *= std::max(0.0, rng.normal(1.0, profile.noise_sigma));
      return honest_candidate(profile.id, scaled_to_budget(std::move(w), s.p_total_w), ctx);
    }
    case ResponderKind::Proportional: {
      std::vector<double> w;
      w.reserve(s.n_lbs);
      for (const auto& pos : s.lbs_pos)
        w.push_back(std::pow(std::max(scenario::norm(pos), scenario::kMinDistanceM), s.alpha));
      return honest_candidate(profile.id, scaled_to_budget(std::move(w), s.p_total_w), ctx);
    }
    case ResponderKind::Uniform:
      return honest_candidate(profile.id, uniform_allocation(s), ctx);
    case ResponderKind::Random: {
      std::vector<double> w(s.n_lbs);
      for (auto& x : w) x = rng.exponential();
      return honest_candidate(profile.id, scaled_to_budget(std::move(w), s.p_total_w), ctx);
    }
    case ResponderKind::MaliciousInverse: {
      scenario::PowerAllocation alloc{std::vector<double>(s.n_lbs, 0.0)};
      alloc.powers_w[least_effective_station(ctx)] = s.p_total_w;
      return make_candidate(profile.id, std::move(alloc), kMaliciousClaim);
    }
    case ResponderKind::Remote:
      break;
  }
  throw Error(Errc::invalid_argument, "REMOTE responders must go through propose_all");
}

ResponseCandidate propose(const ResponderProfile& profile, const scenario::WirelessScenario& s) {
  return propose(profile, ScenarioContext::build(s));
}

std::vector<ProposalResult> propose_all(std::span<const ResponderProfile> profiles, const ScenarioContext& ctx,
                                        std::span<const PromptRecord> history, const RemoteOptions& options) {
  std::vector<const ResponderProfile*> ordered;
  for (const auto& p : profiles) ordered.push_back(&p);
  std::stable_sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });

  const auto& s = *ctx.scenario;
  const std::string prompt = build_prompt(history, s.p_total_w, s.n_lbs, options.history_length);
  std::counting_semaphore<64> slots(
      static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(options.max_in_flight, 1, 64)));

  std::vector<std::future<ProposalResult>> pending(ordered.size());
  std::vector<std::optional<ProposalResult>> ready(ordered.size());
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& profile = *ordered[i];
    if (profile.kind != ResponderKind::Remote) {
      ready[i] = ProposalResult{propose(profile, ctx), std::nullopt};
      continue;
    }
    profile.validate();
    pending[i] = std::async(std::launch::async, [&, profile]() -> ProposalResult {
      slots.acquire();
      std::optional<std::string> failure;
      std::optional<ResponseCandidate> parsed;
      try {
        auto reply = remote_propose(profile.endpoint, prompt, options.timeout_s);
        parsed = parse_allocation_reply(reply, s, profile.id);
      } catch (const Error& e) {
        failure = fmt::format("{}: {}", to_string(e.code()), e.what());
      }
      slots.release();
      if (parsed) return {std::move(*parsed), std::nullopt};
      ResponderProfile fallback = profile;
      fallback.kind = ResponderKind::Uniform;
      return {propose(fallback, ctx), std::move(failure)};
    });
  }
  std::vector<ProposalResult> out;
  out.reserve(ordered.size());
  for (std::size_t i = 0; i < ordered.size(); ++i) out.push_back(ready[i] ? std::move(*ready[i]) : pending[i].get());
  return out;
}

}  // namespace mllmn::responders
