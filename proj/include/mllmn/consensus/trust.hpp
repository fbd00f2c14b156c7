#pragma once

#include <vector>

#include "mllmn/consensus/types.hpp"

namespace mllmn::consensus {

/// EigenTrust-style reputation from vote agreement. local_trust[i][j] is the
/// fraction of j's observed votes (as seen by i) that matched the committed
/// winner; pairs never observed start at 1 and the diagonal is 0.
struct TrustState {
  std::vector<std::vector<double>> local_trust;
  std::vector<double> global_trust;
  std::size_t rounds_observed = 0;
  std::vector<std::vector<std::uint64_t>> agreements;
  std::vector<std::vector<std::uint64_t>> observations;

  static TrustState uniform(std::size_t n);
  std::size_t size() const { return global_trust.size(); }
};

inline constexpr double kTrustDamping = 0.15;
inline constexpr double kTrustTolerance = 1e-9;
inline constexpr std::size_t kTrustMaxIterations = 100;

/// Damped power iteration t <- (1-a) C^T t + a/n over the row-normalized
/// local trust matrix (zero rows become uniform). Result sums to 1.
std::vector<double> eigentrust(const std::vector<std::vector<double>>& local_trust,
                               double damping = kTrustDamping, double tolerance = kTrustTolerance,
                               std::size_t max_iterations = kTrustMaxIterations);

/// Folds one committed round into the trust state. Every node observes every
/// participant's vote; a silent participant counts as disagreeing.
TrustState update_trust(const TrustState& trust, const ConsensusOutcome& outcome);

/// The k highest-trust nodes (ties to the lower index), ordered by index.
std::vector<NodeId> top_k_by_trust(const std::vector<double>& global_trust, std::size_t k);

}  // namespace mllmn::consensus
