#include "mllmn/consensus/trust.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mllmn/common/error.hpp"

namespace mllmn::consensus {

TrustState TrustState::uniform(std::size_t n) {
  TrustState t;
  t.local_trust.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) t.local_trust[i][i] = 0.0;
  t.global_trust.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
  t.agreements.assign(n, std::vector<std::uint64_t>(n, 0));
  t.observations.assign(n, std::vector<std::uint64_t>(n, 0));
  return t;
}

std::vector<double> eigentrust(const std::vector<std::vector<double>>& local, double damping, double tolerance,
                               std::size_t max_iterations) {
  const std::size_t n = local.size();
  if (n == 0) return {};
  const double u = 1.0 / static_cast<double>(n);

  std::vector<std::vector<double>> c(local);
  for (auto& row : c) {
    if (row.size() != n) throw Error(Errc::invalid_argument, "eigentrust: local trust matrix is not square");
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    if (s > 0.0)
      for (auto& x : row) x /= s;
    else
      std::fill(row.begin(), row.end(), u);
  }

  std::vector<double> t(n, u), next(n);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), damping * u);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[j] += (1.0 - damping) * c[i][j] * t[i];
    const double s = std::accumulate(next.begin(), next.end(), 0.0);
    for (auto& x : next) x /= s;
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - t[i]);
    t.swap(next);
    if (delta < tolerance) break;
  }
  return t;
}

TrustState update_trust(const TrustState& trust, const ConsensusOutcome& outcome) {
  const std::size_t n = trust.size();
  if (outcome.observed_votes.size() != n)
    throw Error(Errc::invalid_argument, "update_trust: outcome node count does not match trust state");
  TrustState next = trust;
  const Digest& winner = outcome.winner.candidate_hash;
  for (NodeId j : outcome.committee) {
    const bool agreed = outcome.observed_votes[j.index] == winner;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j.index) continue;
      ++next.observations[i][j.index];
      if (agreed) ++next.agreements[i][j.index];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto seen = next.observations[i][j];
      next.local_trust[i][j] =
          i == j ? 0.0 : seen == 0 ? 1.0 : static_cast<double>(next.agreements[i][j]) / static_cast<double>(seen);
    }
  next.global_trust = eigentrust(next.local_trust);
  ++next.rounds_observed;
  return next;
}

std::vector<NodeId> top_k_by_trust(const std::vector<double>& g, std::size_t k) {
  if (k > g.size()) throw Error(Errc::invalid_config, "committee size exceeds node count");
  std::vector<std::uint32_t> idx(g.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return g[a] > g[b]; });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<NodeId> out;
  for (auto i : idx) out.emplace_back(i);
  return out;
}

}  // namespace mllmn::consensus
