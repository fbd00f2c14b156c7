#include "mllmn/scenario/attack_model.hpp"

#include <cmath>
#include <fmt/format.h>

#include "mllmn/common/error.hpp"

namespace mllmn::scenario {

double channel_gain(double p_w, double d_m, double alpha) {
  const double d = d_m > kMinDistanceM ? d_m : kMinDistanceM;
  return p_w * std::pow(d, -alpha);
}

double outage_factor(double g_fbs, double noise_w, double redundancy_bpshz) {
  if (g_fbs <= 0.0) return 0.0;
  return std::exp(-noise_w * (std::exp2(redundancy_bpshz) - 1.0) / g_fbs);
}

double LbsThreat::attack_prob(double p_w) const {
  const double g = path_gain * p_w;
  double survive_all = 1.0;
  for (const auto& atk : attackers) survive_all *= 1.0 - atk.survival * atk.gain / (atk.gain + g);
  return 1.0 - survive_all;
}

LbsThreat::Eval LbsThreat::defense(double p_w) const {
  // Product rule over the per-attacker factors s_j(p) = 1 - o K / (K + c p).
  Eval acc{1.0, 0.0, 0.0};
  for (const auto& atk : attackers) {
    const double denom = atk.gain + path_gain * p_w;
    const double ok = atk.survival * atk.gain;
    const Eval f{1.0 - ok / denom, ok * path_gain / (denom * denom),
                 -2.0 * ok * path_gain * path_gain / (denom * denom * denom)};
    acc = Eval{acc.value * f.value, acc.d1 * f.value + acc.value * f.d1,
               acc.d2 * f.value + 2.0 * acc.d1 * f.d1 + acc.value * f.d2};
  }
  return acc;
}

std::vector<LbsThreat> build_threats(const WirelessScenario& s, const AttackAssignment& a) {
  if (a.target_of.size() != s.fbs_pos.size())
    throw Error(Errc::invalid_argument, "attack assignment does not match FBS count");
  std::vector<LbsThreat> threats;
  for (std::size_t i = 0; i < s.lbs_pos.size(); ++i) {
    LbsThreat t;
    t.lbs = i;
    t.path_gain = channel_gain(1.0, norm(s.lbs_pos[i]), s.alpha);
    for (std::size_t j = 0; j < a.target_of.size(); ++j) {
      if (a.target_of[j] != i) continue;
      const double g = channel_gain(s.p_fbs_w, norm(s.fbs_pos[j]), s.alpha);
      t.attackers.push_back({g, outage_factor(g, s.noise_w, s.redundancy_bpshz)});
    }
    if (!t.attackers.empty()) threats.push_back(std::move(t));
  }
  return threats;
}

void check_allocation(const WirelessScenario& s, const PowerAllocation& alloc) {
  if (alloc.powers_w.size() != s.n_lbs)
    throw Error(Errc::invalid_allocation,
                fmt::format("allocation has {} powers but the scenario has {} LBSs", alloc.powers_w.size(), s.n_lbs));
  for (std::size_t i = 0; i < alloc.powers_w.size(); ++i)
    if (!(alloc.powers_w[i] >= 0.0) || !std::isfinite(alloc.powers_w[i]))
      throw Error(Errc::invalid_allocation, fmt::format("power p_{} = {} is negative or not finite", i, alloc.powers_w[i]));
  const double total = alloc.total();
  if (total > s.p_total_w * (1.0 + 1e-9))
    throw Error(Errc::invalid_allocation,
                fmt::format("total power {} W exceeds the budget {} W", total, s.p_total_w));
}

double attack_success_prob(const WirelessScenario& s, const PowerAllocation& alloc,
                           const AttackAssignment& a, std::size_t lbs_index) {
  if (lbs_index >= s.lbs_pos.size()) throw Error(Errc::invalid_argument, "LBS index out of range");
  for (const auto& t : build_threats(s, a))
    if (t.lbs == lbs_index) return t.attack_prob(alloc.powers_w.at(lbs_index));
  return 0.0;
}

DefenseReport average_defense(const WirelessScenario& s, const PowerAllocation& alloc,
                              const AttackAssignment& a) {
  check_allocation(s, alloc);
  DefenseReport report;
  report.per_lbs_attack_prob.assign(s.n_lbs, 0.0);
  for (const auto& t : build_threats(s, a))
    report.per_lbs_attack_prob[t.lbs] = t.attack_prob(alloc.powers_w[t.lbs]);
  double sum = 0.0;
  for (double p : report.per_lbs_attack_prob) sum += 1.0 - p;
  report.average_defense = sum / static_cast<double>(s.n_lbs);
  return report;
}

std::vector<double> marginal_defense(const WirelessScenario& s, const PowerAllocation& alloc,
                                     const AttackAssignment& a) {
  check_allocation(s, alloc);
  std::vector<double> out(s.n_lbs, 0.0);
  for (const auto& t : build_threats(s, a))
    out[t.lbs] = t.defense(alloc.powers_w[t.lbs]).d1 / static_cast<double>(s.n_lbs);
  return out;
}

}  // namespace mllmn::scenario
