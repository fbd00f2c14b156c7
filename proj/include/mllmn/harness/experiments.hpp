#pragma once

#include <string>
#include <vector>

#include "mllmn/harness/config.hpp"

namespace mllmn::harness {

struct ResultRow {
  std::string experiment;
  std::string param;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (0 for one trial)
  std::size_t trials = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Every protocol at every sweep value, fault-free. Metrics per protocol:
/// <P>.latency_s, <P>.messages, <P>.bits.
std::vector<ResultRow> run_latency_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kDefenseStrategies[] = {"optimal", "trustworthy", "multi_no_consensus", "single",
                                                      "random"};

/// Per trial (scenario seed = seed ^ trial): optimal allocation, consensus
/// winner, renormalized mean of all candidates, one noisy near-optimal
/// responder, and a random allocation. Trials run in parallel; rows are
/// reported in kDefenseStrategies order.
std::vector<ResultRow> run_defense_experiment(const ExperimentConfig& cfg);

/// Per-trial values behind run_defense_experiment, strategy-major.
std::vector<std::vector<double>> defense_samples(const ExperimentConfig& cfg);

/// Mean of the candidates' allocations rescaled to the budget.
scenario::PowerAllocation mean_allocation(const std::vector<responders::ResponseCandidate>& cands, double p_total_w);

}  // namespace mllmn::harness
