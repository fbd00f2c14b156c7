#include "mllmn/harness/pipeline.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "mllmn/common/error.hpp"
#include "mllmn/ledger/block.hpp"
#include "mllmn/scenario/attack_model.hpp"

namespace mllmn::harness {

consensus::Evaluator scenario_evaluator(const responders::ScenarioContext& ctx) {
  return [&ctx](NodeId, const responders::ResponseCandidate& c) {
    try {
      return ctx.evaluate(c.allocation);
    } catch (const Error& e) {
      if (e.code() != Errc::invalid_allocation) throw;
      return -std::numeric_limits<double>::infinity();
    }
  };
}

Pipeline::Pipeline(ExperimentConfig cfg)
    : cfg_(std::move(cfg)), trust_(consensus::TrustState::uniform(cfg_.consensus.n)), replicas_(cfg_.consensus.n) {
  cfg_.validate();
}

RoundResult Pipeline::run_round() {
  const std::uint64_t r = round_;
  const auto s = scenario::generate_scenario(cfg_.seed ^ r, cfg_.scenario_overrides);
  const auto ctx = responders::ScenarioContext::build(s);

  RoundResult res;
  auto proposals = responders::propose_all(cfg_.responder_profiles, ctx, history_, cfg_.remote);
  consensus::RoundInput in;
  in.round = r;
  in.seed = cfg_.seed;
  in.evaluator = scenario_evaluator(ctx);
  in.policy = {cfg_.byzantine_nodes(), cfg_.adversary_strategy, cfg_.seed};
  for (auto& p : proposals) {
    if (p.failure) res.responder_failures.push_back(fmt::format("node {}: {}", p.candidate.proposer.index, *p.failure));
    res.candidate_defense.push_back(in.evaluator(p.candidate.proposer, p.candidate));
    in.candidates.push_back(std::move(p.candidate));
  }

  res.outcome = consensus::run_consensus(in, cfg_.consensus, cfg_.network, trust_);
  scenario::check_allocation(s, res.outcome.winner.allocation);  // re-checked at commit
  res.winner_defense = ctx.evaluate(res.outcome.winner.allocation);

  clock_us_ += static_cast<std::uint64_t>(std::llround(res.outcome.latency_s * 1e6));
  res.block = ledger::create_block(res.outcome, replicas_.replica(0).tip(), clock_us_);
  replicas_.append(res.block);
  if (!replicas_.identical()) throw Error(Errc::validation_error, fmt::format("round {}: replicas diverged", r));

  trust_ = consensus::update_trust(trust_, res.outcome);
  history_.push_back({s.p_total_w, res.outcome.winner.allocation.powers_w, res.winner_defense});
  ++round_;
  return res;
}

RoundResult run_pipeline(const ExperimentConfig& cfg) {
  Pipeline p(cfg);
  return p.run_round();
}

}  // namespace mllmn::harness
