#pragma once

#include <vector>

#include "mllmn/common/rng.hpp"
#include "mllmn/scenario/scenario.hpp"

namespace mllmn::testutil {

/// Hand-placed scenario with default physical parameters.
inline scenario::WirelessScenario toy(std::vector<scenario::Point> lbs, std::vector<scenario::Point> fbs,
                                      double p_total = 2000.0) {
  scenario::WirelessScenario s;
  s.n_lbs = lbs.size();
  s.n_fbs = fbs.size();
  s.lbs_pos = std::move(lbs);
  s.fbs_pos = std::move(fbs);
  s.p_total_w = p_total;
  s.seed = 7;
  return s;
}

/// Small random instance: n LBSs, every one of them attacked by one or two FBSs.
inline scenario::WirelessScenario random_small(std::uint64_t seed, std::size_t n_lbs, bool single_attacker) {
  scenario::ScenarioOverrides o;
  o.n_lbs = n_lbs;
  o.n_fbs = single_attacker ? n_lbs : n_lbs + 1;
  for (std::uint64_t k = 0;; ++k) {
    auto s = scenario::generate_scenario(mix_seeds(seed, k), o);
    const auto a = scenario::assign_attackers(s);
    std::vector<int> hits(n_lbs, 0);
    for (auto t : a.target_of) ++hits[t];
    bool ok = true;
    for (int h : hits) ok &= single_attacker ? h == 1 : h >= 1;
    if (ok) return s;
  }
}

}  // namespace mllmn::testutil
