#pragma once

#include <vector>

#include "mllmn/scenario/scenario.hpp"

namespace mllmn::scenario {

inline constexpr double kMinDistanceM = 1.0;

/// p * max(d, 1 m)^-alpha
double channel_gain(double p_w, double d_m, double alpha);

/// Probability the FBS link itself sustains the redundancy rate under unit-mean
/// Rayleigh fading: exp(-noise * (2^r - 1) / g_fbs).
double outage_factor(double g_fbs, double noise_w, double redundancy_bpshz);

/// One attacker's contribution to a targeted LBS.
struct Attacker {
  double gain = 0.0;     // g_F at the UE
  double survival = 1.0;  // outage factor of the FBS link
};

/// Everything needed to evaluate one LBS as a function of its own power.
/// Attack success with one attacker: o * g_F / (g_F + c * p). Several
/// attackers combine independently: P = 1 - prod(1 - P_j).
struct LbsThreat {
  std::size_t lbs = 0;
  double path_gain = 1.0;  // c = d^-alpha
  std::vector<Attacker> attackers;

  double attack_prob(double p_w) const;

  /// Defense (1 - P) with its first two derivatives in p.
  struct Eval {
    double value;
    double d1;
    double d2;
  };
  Eval defense(double p_w) const;
};

/// Threat description for every targeted LBS, in LBS order.
std::vector<LbsThreat> build_threats(const WirelessScenario& s, const AttackAssignment& a);

struct DefenseReport {
  std::vector<double> per_lbs_attack_prob;
  double average_defense = 1.0;
};

/// Throws Error(invalid_allocation) unless sizes match, p_i >= 0 and
/// sum(p) <= p_total (1e-9 relative slack).
void check_allocation(const WirelessScenario& s, const PowerAllocation& alloc);

double attack_success_prob(const WirelessScenario& s, const PowerAllocation& alloc,
                           const AttackAssignment& a, std::size_t lbs_index);

DefenseReport average_defense(const WirelessScenario& s, const PowerAllocation& alloc,
                              const AttackAssignment& a);

/// d(average_defense)/dp_i for every LBS (zero for untargeted ones).
std::vector<double> marginal_defense(const WirelessScenario& s, const PowerAllocation& alloc,
                                     const AttackAssignment& a);

}  // namespace mllmn::scenario
