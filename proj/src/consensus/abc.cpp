#include "mllmn/consensus/abc.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <numeric>

#include "mllmn/common/error.hpp"
#include "mllmn/common/rng.hpp"

namespace mllmn::consensus {

namespace {

using Subset = std::vector<std::uint32_t>;  // sorted member indices

struct Source {
  Subset members;
  double fitness = 0.0;
  std::size_t trials = 0;
};

Subset random_subset(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::size_t i = 0; i < m; ++i) std::swap(pool[i], pool[i + rng.index(n - i)]);  // partial Fisher-Yates
  Subset s(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(s.begin(), s.end());
  return s;
}

/// Swap one member for one non-member.
Subset neighbour(Rng& rng, const Subset& s, std::size_t n) {
  if (s.size() == n) return s;
  std::vector<std::uint32_t> outside;
  for (std::uint32_t i = 0; i < n; ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) outside.push_back(i);
  Subset t = s;
  t[rng.index(t.size())] = outside[rng.index(outside.size())];
  std::sort(t.begin(), t.end());
  return t;
}

std::vector<NodeId> to_nodes(const Subset& s) {
  std::vector<NodeId> out;
  for (auto i : s) out.emplace_back(i);
  return out;
}

}  // namespace

double committee_fitness(const std::vector<NodeId>& members, const std::vector<double>& g,
                         const ConsensusConfig& cfg) {
  double sum = 0.0;
  for (NodeId id : members) sum += g.at(id.index);
  const double mean = members.empty() ? 0.0 : sum / static_cast<double>(members.size());
  const double bits = static_cast<double>(committee_message_count(cfg.n, members.size()) * cfg.base_msg_bits);
  return cfg.trust_weights.w_trust * mean - cfg.trust_weights.w_bits * bits;
}

std::vector<NodeId> select_committee_abc(const std::vector<double>& g, const ConsensusConfig& cfg,
                                         std::uint64_t seed) {
  const std::size_t n = g.size();
  const std::size_t m = cfg.abcpbft_committee_size;
  if (m < 1 || m > n) throw Error(Errc::invalid_config, fmt::format("committee size {} not in [1, {}]", m, n));
  if (cfg.abc.population < 2 || cfg.abc.iterations < 1)
    throw Error(Errc::invalid_config, "bee colony needs population >= 2 and iterations >= 1");

  Rng rng(seed);
  auto fit = [&](const Subset& s) { return committee_fitness(to_nodes(s), g, cfg); };

  std::vector<Source> food(cfg.abc.population);
  for (auto& f : food) {
    f.members = random_subset(rng, n, m);
    f.fitness = fit(f.members);
  }
  Source best = *std::max_element(food.begin(), food.end(),
                                  [](const Source& a, const Source& b) { return a.fitness < b.fitness; });

  auto explore = [&](Source& src) {
    Subset cand = neighbour(rng, src.members, n);
    const double fc = fit(cand);
    if (fc > src.fitness) {
      src.members = std::move(cand);
      src.fitness = fc;
      src.trials = 0;
      if (src.fitness > best.fitness) best = src;
    } else {
      ++src.trials;
    }
  };

  for (std::size_t it = 0; it < cfg.abc.iterations; ++it) {
    for (auto& src : food) explore(src);  // employed

    // onlookers: roulette on fitness shifted to be positive
    const double lo = std::min_element(food.begin(), food.end(), [](auto& a, auto& b) { return a.fitness < b.fitness; })
                          ->fitness;
    std::vector<double> weight;
    double total = 0.0;
    for (const auto& src : food) {
      weight.push_back(src.fitness - lo + 1e-12);
      total += weight.back();
    }
    for (std::size_t o = 0; o < food.size(); ++o) {
      double r = rng.uniform() * total;
      std::size_t pick = 0;
      while (pick + 1 < food.size() && r >= weight[pick]) r -= weight[pick++];
      explore(food[pick]);
    }

    for (auto& src : food) {  // scouts
      if (src.trials < cfg.abc.scout_limit) continue;
      src.members = random_subset(rng, n, m);
      src.fitness = fit(src.members);
      src.trials = 0;
      if (src.fitness > best.fitness) best = src;
    }
  }
  return to_nodes(best.members);
}

}  // namespace mllmn::consensus
