#pragma once

// Independent reference computations used by the unit and acceptance tests.
// They deliberately avoid the library's attack-model and solver code paths.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mllmn/common/rng.hpp"
#include "mllmn/scenario/scenario.hpp"

namespace mllmn::oracle {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Fading simulation of the capture event for one LBS. Each attacker j wins
/// when its faded received power beats an independently faded LBS signal and
/// its own faded link clears the SNR threshold 2^r - 1. The LBS is captured
/// when any attacker wins.
inline McEstimate monte_carlo_attack(const scenario::WirelessScenario& s, const std::vector<double>& powers,
                                     const std::vector<std::size_t>& target_of, std::size_t lbs,
                                     std::size_t samples, std::uint64_t seed) {
  auto gain = [&](double p, scenario::Point at) {
    const double d = std::max(1.0, std::hypot(at.x, at.y));
    return p / std::pow(d, s.alpha);
  };
  const double g_l = gain(powers[lbs], s.lbs_pos[lbs]);
  std::vector<double> g_f;
  for (std::size_t j = 0; j < target_of.size(); ++j)
    if (target_of[j] == lbs) g_f.push_back(gain(s.p_fbs_w, s.fbs_pos[j]));
  const double snr_threshold = std::pow(2.0, s.redundancy_bpshz) - 1.0;

  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t n = 0; n < samples; ++n) {
    bool captured = false;
    for (double gf : g_f) {
      const double h_attack = rng.exponential();
      const double h_legit = rng.exponential();
      const double h_link = rng.exponential();
      const bool wins = gf * h_attack > g_l * h_legit;
      const bool link_ok = gf * h_link >= s.noise_w * snr_threshold;
      captured |= wins && link_ok;
    }
    hits += captured;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(std::max(p * (1 - p), 1e-300) / static_cast<double>(samples))};
}

/// O(n_fbs * n_lbs) nearest-LBS scan with ties to the lower index.
inline std::vector<std::size_t> nearest_lbs_scan(const scenario::WirelessScenario& s) {
  std::vector<std::size_t> out;
  for (const auto& f : s.fbs_pos) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.lbs_pos.size(); ++i) {
      const double dx = f.x - s.lbs_pos[i].x, dy = f.y - s.lbs_pos[i].y;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace mllmn::oracle
