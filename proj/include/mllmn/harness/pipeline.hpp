#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mllmn/consensus/consensus.hpp"
#include "mllmn/harness/config.hpp"
#include "mllmn/ledger/chain.hpp"
#include "mllmn/responders/responder.hpp"

namespace mllmn::harness {

struct RoundResult {
  consensus::ConsensusOutcome outcome;
  ledger::Block block;
  double winner_defense = 0.0;
  std::vector<double> candidate_defense;  // true evaluated defense, NodeId order
  std::vector<std::string> responder_failures;
};

/// Request -> proposals -> consensus -> block -> replicated append, round
/// after round. Holds the trust state, the chain replicas, the prompt history
/// and the simulation clock (advanced by each round's consensus latency).
class Pipeline {
 public:
  explicit Pipeline(ExperimentConfig cfg);

  /// Round r uses the scenario generated from seed ^ r. no_quorum and
  /// invalid_allocation propagate.
  RoundResult run_round();

  const ledger::ReplicaSet& replicas() const { return replicas_; }
  const consensus::TrustState& trust() const { return trust_; }
  std::uint64_t rounds_run() const { return round_; }
  std::uint64_t clock_us() const { return clock_us_; }

 private:
  ExperimentConfig cfg_;
  consensus::TrustState trust_;
  ledger::ReplicaSet replicas_;
  std::vector<responders::PromptRecord> history_;
  std::uint64_t round_ = 0;
  std::uint64_t clock_us_ = 0;
};

/// One round on a fresh pipeline.
RoundResult run_pipeline(const ExperimentConfig& cfg);

/// Evaluator that scores with the scenario model; invalid allocations score -inf.
consensus::Evaluator scenario_evaluator(const responders::ScenarioContext& ctx);

}  // namespace mllmn::harness
